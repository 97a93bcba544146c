//! Free `(kG)^e`-resolutions of `kG`: the bar resolution and the 2-periodic
//! resolution of a cyclic group.

use std::collections::HashMap;
use std::sync::Arc;

use super::algebra::GradedSkewAlgebra;
use super::free::{BimoduleMap, Generator, GradedFreeBimodule, Term, TruncatedComplex};
use crate::group::FiniteGroup;
use crate::linear::sparse::Accumulator;
use crate::linear::FieldSpec;

/// The bar resolution `kG^{⊗(i+2)}` up to homological degree `len`.
///
/// `C_i'` has basis the `i`-tuples of group elements, with G-component their
/// product. With `normalized`, tuples containing the identity are dropped.
pub fn bar_resolution_kg(group: &FiniteGroup, field: FieldSpec, len: usize, normalized: bool) -> TruncatedComplex {
    let ring = Arc::new(GradedSkewAlgebra::group_algebra(group.clone(), field));
    let e = group.identity();
    let mut tuples: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new()]];
    for i in 1..=len {
        let next = tuples[i - 1]
            .iter()
            .flat_map(|t| {
                group
                    .elements()
                    .filter(move |&g| !(normalized && g == e))
                    .map(move |g| {
                        let mut t = t.clone();
                        t.push(g);
                        t
                    })
            })
            .collect();
        tuples.push(next);
    }
    let modules: Vec<Arc<GradedFreeBimodule>> = tuples
        .iter()
        .map(|ts| {
            let gens = ts
                .iter()
                .map(|t| Generator {
                    degree: 0,
                    grade: t.iter().fold(e, |acc, &g| group.mul(acc, g)),
                })
                .collect();
            Arc::new(GradedFreeBimodule::new(ring.clone(), gens))
        })
        .collect();
    let positions: Vec<HashMap<&[usize], usize>> = tuples
        .iter()
        .map(|ts| ts.iter().enumerate().map(|(k, t)| (t.as_slice(), k)).collect())
        .collect();
    let one = field.one();
    let minus = field.from_i64(-1);
    let diffs = (1..=len)
        .map(|i| {
            let target = &modules[i - 1];
            let pos = &positions[i - 1];
            let images = tuples[i]
                .iter()
                .map(|t| {
                    let mut acc = Accumulator::new();
                    let mut push = |left: usize, sub: &[usize], right: usize, c| {
                        if let Some(&gen) = pos.get(sub) {
                            let left = ring.group_element(left);
                            let right = ring.group_element(right);
                            acc.add(target.index(Term { left, gen, right }), c);
                        }
                    };
                    push(t[0], &t[1..], e, &one);
                    for j in 1..i {
                        let mut merged = t[..j - 1].to_vec();
                        merged.push(group.mul(t[j - 1], t[j]));
                        merged.extend_from_slice(&t[j + 1..]);
                        push(e, &merged, e, if j % 2 == 1 { &minus } else { &one });
                    }
                    push(e, &t[..i - 1], t[i - 1], if i % 2 == 1 { &minus } else { &one });
                    acc.finish()
                })
                .collect();
            BimoduleMap::new(modules[i].clone(), target.clone(), images)
        })
        .collect();
    TruncatedComplex::new(modules, diffs)
}

/// `⋯ → kG⊗kG --v--> kG⊗kG --u--> kG⊗kG → kG` for `G = Z/p = ⟨g⟩`, with
/// `u = g⊗1 − 1⊗g` and `v = Σ_j g^{p−1−j}⊗g^j`.
///
/// Even degrees carry the usual grading (`x⊗y` in component `xy`); odd degrees
/// are shifted so that `x⊗y` lies in component `xyg`, which makes every
/// differential grade-preserving.
pub fn periodic_resolution_cyclic(p: usize, field: FieldSpec, len: usize) -> TruncatedComplex {
    let group = FiniteGroup::cyclic(p);
    let ring = Arc::new(GradedSkewAlgebra::group_algebra(group.clone(), field));
    let g = 1 % p;
    let modules: Vec<Arc<GradedFreeBimodule>> = (0..=len)
        .map(|k| {
            let grade = if k % 2 == 1 { g } else { 0 };
            Arc::new(GradedFreeBimodule::new(ring.clone(), vec![Generator { degree: 0, grade }]))
        })
        .collect();
    let diffs = (1..=len)
        .map(|k| {
            let target = &modules[k - 1];
            let idx = |l: usize, r: usize| {
                target.index(Term {
                    left: ring.group_element(l),
                    gen: 0,
                    right: ring.group_element(r),
                })
            };
            let mut acc = Accumulator::new();
            if k % 2 == 1 {
                acc.add(idx(g, 0), &field.one());
                acc.add(idx(0, g), &field.from_i64(-1));
            } else {
                for j in 0..p {
                    acc.add(idx(group.pow(g, p - 1 - j), group.pow(g, j)), &field.one());
                }
            }
            BimoduleMap::new(modules[k].clone(), target.clone(), vec![acc.finish()])
        })
        .collect();
    TruncatedComplex::new(modules, diffs)
}
