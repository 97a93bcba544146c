//! The Koszul resolution `S ⊗ K^•(S) ⊗ S` of a Koszul algebra, with its G-action.

use std::sync::Arc;

use super::algebra::GradedSkewAlgebra;
use super::free::{BimoduleMap, Generator, GradedFreeBimodule, Term, TruncatedComplex};
use crate::error::{Error, Result};
use crate::linear::sparse::{from_dense, Accumulator};
use crate::linear::{Scalar, SparseVec, Subspace};
use crate::pbw::{koszul_check, koszul_component, HomQuadraticPresentation};

/// `D_j = S ⊗ K^j ⊗ S` with `d(1⊗y⊗1) = Σ_a v_a⊗y_a⊗1 + (−1)^j Σ_b 1⊗y'_b⊗v_b`
/// where `y = Σ_a v_a⊗y_a = Σ_b y'_b⊗v_b`, i.e. the bar differential restricted
/// to `K^j`, whose middle terms vanish.
///
/// Generators of `D_j` are the rref basis of `K^j`.
pub struct KoszulResolution {
    complex: TruncatedComplex,
    skew: Arc<GradedSkewAlgebra>,
    components: Vec<Subspace>,
    /// `action[g][j][y]` = coordinates of `^g y` in the generators of `D_j`.
    action: Vec<Vec<Vec<SparseVec>>>,
}

/// Builds `D_0 … D_len` on pieces of degree `≤ polydeg_cap`, after certifying
/// exactness of the Koszul complex within the same window.
pub fn koszul_resolution(hom: &HomQuadraticPresentation, len: usize, polydeg_cap: usize) -> Result<KoszulResolution> {
    if !koszul_check(hom, len, polydeg_cap).exact {
        return Err(Error::NotKoszulCertified);
    }
    Ok(koszul_resolution_unchecked(hom, len, polydeg_cap))
}

/// As [`koszul_resolution`] without the exactness certificate.
pub fn koszul_resolution_unchecked(hom: &HomQuadraticPresentation, len: usize, polydeg_cap: usize) -> KoszulResolution {
    let field = hom.field();
    let n = hom.dim_v();
    let ring = Arc::new(GradedSkewAlgebra::quadratic(field, n, &hom.rprime, polydeg_cap));
    let skew = Arc::new(GradedSkewAlgebra::skew(hom, polydeg_cap));
    let components: Vec<Subspace> = (0..=len).map(|j| koszul_component(hom, j)).collect();
    let modules: Vec<Arc<GradedFreeBimodule>> = components
        .iter()
        .enumerate()
        .map(|(j, k)| {
            let gens = vec![Generator { degree: j, grade: 0 }; k.dim()];
            Arc::new(GradedFreeBimodule::new(ring.clone(), gens))
        })
        .collect();
    let one = ring.group_element(0);
    let diffs = (1..=len)
        .map(|j| {
            let target = &modules[j - 1];
            let lower = &components[j - 1];
            let tail = n.pow(j as u32 - 1);
            let sign = field.from_i64(if j % 2 == 0 { 1 } else { -1 });
            let images = components[j]
                .basis_vectors()
                .iter()
                .map(|y| {
                    let mut acc = Accumulator::new();
                    // generators above the cap never meet a stored piece
                    if j > polydeg_cap {
                        return acc.finish();
                    }
                    for a in 0..n {
                        // leading letter: y = Σ_a v_a ⊗ y_a
                        let ya: Vec<Scalar> = y[a * tail..(a + 1) * tail].to_vec();
                        // trailing letter: y = Σ_b y'_b ⊗ v_b
                        let yb: Vec<Scalar> = (0..tail).map(|w| y[w * n + a].clone()).collect();
                        let v = ring.letter(a);
                        for (part, left) in [(ya, true), (yb, false)] {
                            if part.iter().all(Scalar::is_zero) {
                                continue;
                            }
                            let coords = lower.coordinates(&part).expect("K^j ⊆ V⊗K^{j−1} ∩ K^{j−1}⊗V");
                            for (gen, c) in from_dense(&coords) {
                                let (l, r, c) = if left { (v, one, c) } else { (one, v, &c * &sign) };
                                acc.add(target.index(Term { left: l, gen, right: r }), &c);
                            }
                        }
                    }
                    acc.finish()
                })
                .collect();
            BimoduleMap::new(modules[j].clone(), target.clone(), images)
        })
        .collect();
    let action = hom
        .rep
        .group()
        .elements()
        .map(|g| {
            components
                .iter()
                .enumerate()
                .map(|(j, k)| {
                    let m = hom.rep.tensor_power_matrix(g, j);
                    k.basis_vectors()
                        .iter()
                        .map(|y| from_dense(&k.coordinates(&m.apply(y)).expect("K^j is G-stable")))
                        .collect()
                })
                .collect()
        })
        .collect();
    KoszulResolution {
        complex: TruncatedComplex::new(modules, diffs),
        skew,
        components,
        action,
    }
}

impl KoszulResolution {
    pub fn complex(&self) -> &TruncatedComplex {
        &self.complex
    }

    /// `A = S#G`, sharing the normal-word basis of `S`.
    pub fn skew(&self) -> &Arc<GradedSkewAlgebra> {
        &self.skew
    }

    pub fn len(&self) -> usize {
        self.complex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.complex.is_empty()
    }

    pub fn component(&self, j: usize) -> &Subspace {
        &self.components[j]
    }

    /// `^g y` for the `y`-th generator of `D_j`.
    pub fn act_generator(&self, g: usize, j: usize, y: usize) -> &SparseVec {
        &self.action[g][j][y]
    }

    /// `^g (s ⊗ y ⊗ t) = ^g s ⊗ ^g y ⊗ ^g t` on the degree-`d` piece of `D_j`.
    pub fn act(&self, g: usize, j: usize, d: usize, x: &[(usize, Scalar)]) -> SparseVec {
        let m = self.complex.module(j);
        let mut acc = Accumulator::new();
        for (idx, c) in x {
            let t = m.term(d, *idx);
            let left = self.skew.act_s(g, t.left.0, t.left.1);
            let right = self.skew.act_s(g, t.right.0, t.right.1);
            for (y, cy) in self.act_generator(g, j, t.gen) {
                for (l, cl) in left {
                    for (r, cr) in right {
                        let i = m.index(Term {
                            left: (t.left.0, *l),
                            gen: *y,
                            right: (t.right.0, *r),
                        });
                        acc.add(i, &(&(&(c * cy) * cl) * cr));
                    }
                }
            }
        }
        acc.finish()
    }

    /// First `(g, j)` where `d_j` fails to commute with the group action.
    pub fn equivariance_failure(&self) -> Option<(usize, usize)> {
        let order = self.skew.order();
        for j in 1..=self.len() {
            let d = self.complex.differential(j);
            for g in 0..order {
                for y in 0..self.complex.module(j).rank() {
                    let mut lhs = Accumulator::new();
                    for (z, c) in self.act_generator(g, j, y) {
                        lhs.add_scaled(d.image(*z), c);
                    }
                    let rhs = self.act(g, j - 1, j, d.image(y));
                    if lhs.finish() != rhs {
                        return Some((g, j));
                    }
                }
            }
        }
        None
    }
}
