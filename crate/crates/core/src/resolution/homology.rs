//! Degreewise homology of a truncated complex of free bimodules.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use super::free::TruncatedComplex;
use crate::linear::SparseMap;
use crate::par::Exec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyEntry {
    pub ker: usize,
    pub im: usize,
    pub homology: usize,
}

/// Homology dimensions on the window `n ≤ max_homological`, `d ≤ polydeg_cap`.
///
/// Position `(0, d)` records the cokernel of `d_1`, expected to be `dim A_d`;
/// every other position is expected to vanish.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    pub max_homological: usize,
    pub polydeg_cap: usize,
    #[serde(serialize_with = "keyed")]
    pub table: BTreeMap<(usize, usize), HomologyEntry>,
    /// `dim A_d` for `d ≤ polydeg_cap`.
    pub expected_h0: Vec<usize>,
    pub exact: bool,
}

fn keyed<S: Serializer>(table: &BTreeMap<(usize, usize), HomologyEntry>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_map(table.iter().map(|((n, d), e)| (format!("{n},{d}"), e)))
}

impl HomologyReport {
    pub fn get(&self, n: usize, d: usize) -> HomologyEntry {
        self.table[&(n, d)]
    }

    /// Positions whose homology differs from the resolution's expectation.
    pub fn failures(&self) -> Vec<(usize, usize)> {
        self.table
            .iter()
            .filter(|((n, d), e)| e.homology != if *n == 0 { self.expected_h0[*d] } else { 0 })
            .map(|(k, _)| *k)
            .collect()
    }
}

/// Computes `dim ker d_n − dim (im d_{n+1} ∩ ker d_n)` on each piece.
///
/// The intersection is measured as `rank d_{n+1} − rank d_n d_{n+1}`, so the
/// table stays meaningful for sequences with `d² ≠ 0`. Needs `complex.len() > max_homological`.
pub fn homology_dims(
    complex: &TruncatedComplex,
    max_homological: usize,
    polydeg_cap: usize,
    exec: Exec,
) -> HomologyReport {
    assert!(complex.len() > max_homological, "complex too short for the window");
    let ring = complex.ring().clone();
    let graded = complex.grading_failure().is_none();
    let order = ring.order();
    let rank = move |m: &SparseMap, grades: &[usize]| {
        if graded {
            m.rank_blocked(grades, order, Exec::Sequential)
        } else {
            m.rank()
        }
    };

    let jobs: Vec<(usize, usize)> = (0..=polydeg_cap)
        .flat_map(|d| (0..=max_homological).map(move |n| (n, d)))
        .collect();
    let entries = exec.map(jobs.clone(), |(n, d)| {
        let dim = complex.module(n).dim(d);
        let next = complex.differential(n + 1).matrix(d);
        let next_rank = rank(&next, &complex.module(n).grades(d));
        let (rank_n, composite) = if n == 0 {
            (0, 0)
        } else {
            let cur = complex.differential(n).matrix(d);
            let lower = complex.module(n - 1).grades(d);
            let comp = cur.compose(&next);
            let comp_rank = if comp.is_zero() { 0 } else { rank(&comp, &lower) };
            (rank(&cur, &lower), comp_rank)
        };
        let ker = dim - rank_n;
        let im = next_rank - composite;
        HomologyEntry {
            ker,
            im,
            homology: ker - im,
        }
    });
    let table: BTreeMap<_, _> = jobs.into_iter().zip(entries).collect();
    let expected_h0: Vec<usize> = (0..=polydeg_cap).map(|d| ring.dim(d)).collect();
    let mut report = HomologyReport {
        max_homological,
        polydeg_cap,
        table,
        expected_h0,
        exact: false,
    };
    report.exact = report.failures().is_empty();
    report
}
