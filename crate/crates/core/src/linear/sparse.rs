//! Sparse vectors, sparse linear maps and incremental echelon reduction.
//!
//! Prime-field work is routed through a `u32` kernel; rationals use [`Scalar`].

use std::collections::BTreeMap;
use std::collections::HashMap;

use super::field::{pow_mod, FieldSpec, Scalar};
use crate::par::Exec;

/// Sorted `(index, nonzero coefficient)` pairs.
pub type SparseVec = Vec<(usize, Scalar)>;

/// Accumulates `Σ c_i e_i` and returns a sorted sparse vector with zeros removed.
#[derive(Clone, Debug, Default)]
pub struct Accumulator {
    terms: BTreeMap<usize, Scalar>,
}

impl Accumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, idx: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&idx) {
            Some(x) => *x += c,
            None => {
                self.terms.insert(idx, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, v: &[(usize, Scalar)], f: &Scalar) {
        if f.is_zero() {
            return;
        }
        for (i, c) in v {
            self.add(*i, &(c * f));
        }
    }

    pub fn finish(self) -> SparseVec {
        self.terms.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }
}

pub fn to_dense(field: FieldSpec, dim: usize, v: &[(usize, Scalar)]) -> Vec<Scalar> {
    let mut out = vec![field.zero(); dim];
    for (i, c) in v {
        out[*i] = c.clone();
    }
    out
}

pub fn from_dense(v: &[Scalar]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

trait Arith {
    type E: Clone;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// `a - f b`
    fn sub_mul(&self, a: &Self::E, f: &Self::E, b: &Self::E) -> Self::E;
    fn neg_mul(&self, f: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
}

struct ScalarArith;

impl Arith for ScalarArith {
    type E = Scalar;
    fn is_zero(&self, a: &Scalar) -> bool {
        a.is_zero()
    }
    fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a * b
    }
    fn sub_mul(&self, a: &Scalar, f: &Scalar, b: &Scalar) -> Scalar {
        a - &(f * b)
    }
    fn neg_mul(&self, f: &Scalar, b: &Scalar) -> Scalar {
        -(f * b)
    }
    fn inv(&self, a: &Scalar) -> Scalar {
        a.inv()
    }
}

struct ModArith(u64);

impl Arith for ModArith {
    type E = u32;
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        (*a as u64 * *b as u64 % self.0) as u32
    }
    fn sub_mul(&self, a: &u32, f: &u32, b: &u32) -> u32 {
        let fb = *f as u64 * *b as u64 % self.0;
        ((*a as u64 + self.0 - fb) % self.0) as u32
    }
    fn neg_mul(&self, f: &u32, b: &u32) -> u32 {
        let fb = *f as u64 * *b as u64 % self.0;
        ((self.0 - fb) % self.0) as u32
    }
    fn inv(&self, a: &u32) -> u32 {
        pow_mod(*a as u64, self.0 - 2, self.0) as u32
    }
}

/// Semi-echelon basis whose pivots are the *largest* nonzero index of each row.
struct GenericEchelon<A: Arith> {
    arith: A,
    rows: HashMap<usize, Vec<(usize, A::E)>>,
}

impl<A: Arith> GenericEchelon<A> {
    fn new(arith: A) -> Self {
        GenericEchelon {
            arith,
            rows: HashMap::new(),
        }
    }

    fn sub_scaled(&self, a: &[(usize, A::E)], f: &A::E, b: &[(usize, A::E)]) -> Vec<(usize, A::E)> {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, self.arith.neg_mul(f, &b[j].1)));
                j += 1;
            } else {
                let c = self.arith.sub_mul(&a[i].1, f, &b[j].1);
                if !self.arith.is_zero(&c) {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        out
    }

    fn reduce(&self, mut v: Vec<(usize, A::E)>) -> Vec<(usize, A::E)> {
        while let Some((lead, c)) = v.last().cloned() {
            match self.rows.get(&lead) {
                Some(row) => v = self.sub_scaled(&v, &c, row),
                None => break,
            }
        }
        v
    }

    /// Eliminates every pivot index from `v`, not just the leading one.
    fn reduce_full(&self, mut v: Vec<(usize, A::E)>) -> Vec<(usize, A::E)> {
        let mut bound = usize::MAX;
        loop {
            let hit = v
                .iter()
                .rev()
                .find(|(i, _)| *i < bound && self.rows.contains_key(i))
                .cloned();
            let Some((idx, c)) = hit else { return v };
            v = self.sub_scaled(&v, &c, &self.rows[&idx]);
            bound = idx;
        }
    }

    fn insert(&mut self, v: Vec<(usize, A::E)>) -> Option<usize> {
        let v = self.reduce(v);
        let (lead, c) = v.last().cloned()?;
        let inv = self.arith.inv(&c);
        let v = v
            .into_iter()
            .map(|(i, x)| (i, self.arith.mul(&x, &inv)))
            .collect();
        self.rows.insert(lead, v);
        Some(lead)
    }
}

enum Inner {
    Rational(GenericEchelon<ScalarArith>),
    Prime(GenericEchelon<ModArith>, u32),
}

/// Incremental echelon basis over an exact field.
///
/// Each stored row is normalised so that its largest nonzero index carries a 1;
/// that index is the row's pivot. Distinct rows have distinct pivots.
pub struct Echelon {
    inner: Inner,
}

impl Echelon {
    pub fn new(field: FieldSpec) -> Self {
        let inner = match field {
            FieldSpec::Rationals => Inner::Rational(GenericEchelon::new(ScalarArith)),
            FieldSpec::Prime(p) => Inner::Prime(GenericEchelon::new(ModArith(p as u64)), p),
        };
        Echelon { inner }
    }

    /// Inserts `v`; returns the new pivot if `v` was independent of the rows so far.
    pub fn insert(&mut self, v: SparseVec) -> Option<usize> {
        match &mut self.inner {
            Inner::Rational(e) => e.insert(v),
            Inner::Prime(e, _) => e.insert(to_residues(v)),
        }
    }

    /// Reduces `v` against the stored rows (only leading terms are eliminated).
    pub fn reduce(&self, v: SparseVec) -> SparseVec {
        match &self.inner {
            Inner::Rational(e) => e.reduce(v),
            Inner::Prime(e, p) => {
                let f = FieldSpec::Prime(*p);
                e.reduce(to_residues(v))
                    .into_iter()
                    .map(|(i, x)| (i, f.from_i64(x as i64)))
                    .collect()
            }
        }
    }

    /// Reduces `v` until no stored pivot index occurs in it; the result is
    /// canonical modulo the span.
    pub fn reduce_full(&self, v: SparseVec) -> SparseVec {
        match &self.inner {
            Inner::Rational(e) => e.reduce_full(v),
            Inner::Prime(e, p) => {
                let f = FieldSpec::Prime(*p);
                e.reduce_full(to_residues(v))
                    .into_iter()
                    .map(|(i, x)| (i, f.from_i64(x as i64)))
                    .collect()
            }
        }
    }

    pub fn contains(&self, v: SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    pub fn rank(&self) -> usize {
        match &self.inner {
            Inner::Rational(e) => e.rows.len(),
            Inner::Prime(e, _) => e.rows.len(),
        }
    }

    /// Pivot indices in increasing order.
    pub fn pivots(&self) -> Vec<usize> {
        let mut p: Vec<usize> = match &self.inner {
            Inner::Rational(e) => e.rows.keys().copied().collect(),
            Inner::Prime(e, _) => e.rows.keys().copied().collect(),
        };
        p.sort_unstable();
        p
    }

    /// Stored rows, ordered by pivot.
    pub fn rows(&self) -> Vec<SparseVec> {
        let pivots = self.pivots();
        match &self.inner {
            Inner::Rational(e) => pivots.iter().map(|p| e.rows[p].clone()).collect(),
            Inner::Prime(e, p) => {
                let f = FieldSpec::Prime(*p);
                pivots
                    .iter()
                    .map(|k| {
                        e.rows[k]
                            .iter()
                            .map(|(i, x)| (*i, f.from_i64(*x as i64)))
                            .collect()
                    })
                    .collect()
            }
        }
    }
}

fn to_residues(v: SparseVec) -> Vec<(usize, u32)> {
    v.into_iter()
        .map(|(i, c)| (i, c.residue().expect("prime field scalar")))
        .collect()
}

/// Rank of the span of `vectors`.
pub fn rank_of(field: FieldSpec, vectors: impl IntoIterator<Item = SparseVec>) -> usize {
    let mut e = Echelon::new(field);
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// A linear map between spaces with fixed bases, stored column by column.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMap {
    field: FieldSpec,
    target_dim: usize,
    columns: Vec<SparseVec>,
}

impl SparseMap {
    pub fn new(field: FieldSpec, target_dim: usize, columns: Vec<SparseVec>) -> Self {
        debug_assert!(columns.iter().flatten().all(|(i, _)| *i < target_dim));
        SparseMap {
            field,
            target_dim,
            columns,
        }
    }

    pub fn zero(field: FieldSpec, source_dim: usize, target_dim: usize) -> Self {
        SparseMap::new(field, target_dim, vec![Vec::new(); source_dim])
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn source_dim(&self) -> usize {
        self.columns.len()
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn apply(&self, v: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Accumulator::new();
        for (j, c) in v {
            acc.add_scaled(&self.columns[*j], c);
        }
        acc.finish()
    }

    /// `self ∘ before`.
    pub fn compose(&self, before: &SparseMap) -> SparseMap {
        assert_eq!(before.target_dim, self.source_dim(), "composable maps");
        let columns = before.columns.iter().map(|c| self.apply(c)).collect();
        SparseMap::new(self.field, self.target_dim, columns)
    }

    pub fn add(&self, other: &SparseMap) -> SparseMap {
        assert_eq!(self.source_dim(), other.source_dim());
        assert_eq!(self.target_dim, other.target_dim);
        let one = self.field.one();
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| {
                let mut acc = Accumulator::new();
                acc.add_scaled(a, &one);
                acc.add_scaled(b, &one);
                acc.finish()
            })
            .collect();
        SparseMap::new(self.field, self.target_dim, columns)
    }

    pub fn scale(&self, f: &Scalar) -> SparseMap {
        let columns = self
            .columns
            .iter()
            .map(|c| {
                c.iter()
                    .map(|(i, x)| (*i, x * f))
                    .filter(|(_, x)| !x.is_zero())
                    .collect()
            })
            .collect();
        SparseMap::new(self.field, self.target_dim, columns)
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn rank(&self) -> usize {
        rank_of(self.field, self.columns.iter().cloned())
    }

    /// Rank computed on independent column blocks; `blocks` partitions the target
    /// indices so that every column lies in a single block.
    pub fn rank_blocked(&self, block_of_target: &[usize], n_blocks: usize, exec: Exec) -> usize {
        let mut groups: Vec<Vec<SparseVec>> = vec![Vec::new(); n_blocks];
        for c in &self.columns {
            if let Some((i, _)) = c.first() {
                groups[block_of_target[*i]].push(c.clone());
            }
        }
        let field = self.field;
        exec.map(groups, |g| rank_of(field, g)).into_iter().sum()
    }
}

/// Solves `M x = b` for a fixed sparse `M`.
///
/// Columns are echelonised in order with their combination tracked in low
/// "tag" coordinates, so a solution only uses the first maximal independent
/// set of columns (free variables are zero) and is therefore deterministic.
pub struct SparseSolver {
    source_dim: usize,
    echelon: Echelon,
}

impl SparseSolver {
    pub fn new(map: &SparseMap) -> Self {
        let field = map.field();
        let source_dim = map.source_dim();
        let mut echelon = Echelon::new(field);
        for (j, col) in map.columns().iter().enumerate() {
            let mut v: SparseVec = vec![(j, field.one())];
            v.extend(col.iter().map(|(i, c)| (i + source_dim, c.clone())));
            let r = echelon.reduce(v);
            // dependent columns would only add kernel vectors
            if r.last().is_some_and(|(i, _)| *i >= source_dim) {
                echelon.insert(r);
            }
        }
        SparseSolver {
            source_dim,
            echelon,
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn solve(&self, b: &[(usize, Scalar)]) -> Option<SparseVec> {
        let n = self.source_dim;
        let v = b.iter().map(|(i, c)| (i + n, c.clone())).collect();
        let r = self.echelon.reduce(v);
        if r.last().is_some_and(|(i, _)| *i >= n) {
            return None;
        }
        Some(r.into_iter().map(|(j, c)| (j, -c)).collect())
    }
}
