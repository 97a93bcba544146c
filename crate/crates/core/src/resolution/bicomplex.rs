//! The bicomplex `X_{i,j} = (A ⊗_{kG} C_i) ⊗_A (D_j ⊗_S A) ≅ A ⊗ C_i' ⊗ D_j' ⊗ A`
//! and its total complex.

use std::sync::Arc;

use serde::Serialize;

use super::algebra::GradedSkewAlgebra;
use super::free::{BimoduleMap, Generator, GradedFreeBimodule, Term, TruncatedComplex};
use super::koszul_res::KoszulResolution;
use crate::error::{Error, Result};
use crate::linear::sparse::Accumulator;
use crate::linear::Scalar;

/// Which of the three bicomplex identities fails, and where.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BicomplexIdentity {
    HorizontalSquare,
    VerticalSquare,
    Anticommute,
}

/// `X_n = ⊕_{i+j=n} X_{i,j}` with `d = d^h + d^v`, `d^h = d_i ⊗ id`,
/// `d^v = (−1)^i id ⊗ d_j`.
pub struct BiComplexX {
    ring: Arc<GradedSkewAlgebra>,
    c_ranks: Vec<usize>,
    d_ranks: Vec<usize>,
    /// Basis of `K^j` generating `D_j'`, as vectors in `V^{⊗j}`.
    components: Vec<Vec<Vec<Scalar>>>,
    /// `offsets[n][i]` = first generator of `X_{i,n−i}` inside `X_n`.
    offsets: Vec<Vec<usize>>,
    total: TruncatedComplex,
    dh: Vec<BimoduleMap>,
    dv: Vec<BimoduleMap>,
}

/// Knobs for [`build_x_with`]; the default is the checked construction.
#[derive(Clone, Copy, Debug, Default)]
pub struct BuildOptions {
    /// Skip the hypothesis and identity checks.
    pub unchecked: bool,
    /// Drop the `(−1)^i` from `d^v` (a deliberately wrong bicomplex).
    pub corrupt_vertical_sign: bool,
}

/// Builds `X_0 … X_len`. `C` must be a complex over `kG` for the group of `D`,
/// with grade-preserving differentials; `D` must be G-equivariant.
pub fn build_x(c: &TruncatedComplex, d: &KoszulResolution, len: usize) -> Result<BiComplexX> {
    build_x_with(c, d, len, BuildOptions::default())
}

pub fn build_x_with(c: &TruncatedComplex, d: &KoszulResolution, len: usize, opts: BuildOptions) -> Result<BiComplexX> {
    let ring = d.skew().clone();
    let group = ring.group();
    if c.len() < len || d.len() < len {
        return Err(Error::HypothesisViolation(format!(
            "factor complexes must reach homological degree {len}"
        )));
    }
    let c_ring = c.ring();
    if c_ring.order() != group.order() || c_ring.dim_v() != 0 || c_ring.group().table() != group.table() {
        return Err(Error::HypothesisViolation(
            "C must be a complex over the group algebra of the acting group".into(),
        ));
    }
    if !opts.unchecked {
        if let Some(n) = c.grading_failure() {
            return Err(Error::HypothesisViolation(format!(
                "differential d_{n} of C does not preserve the G-grading"
            )));
        }
        if let Some(n) = c.d_squared_failure() {
            return Err(Error::HypothesisViolation(format!("C is not a complex at degree {n}")));
        }
        if let Some((g, j)) = d.equivariance_failure() {
            return Err(Error::HypothesisViolation(format!(
                "differential d_{j} of D is not equivariant under element {g}"
            )));
        }
    }

    let c_ranks: Vec<usize> = (0..=len).map(|i| c.module(i).rank()).collect();
    let d_ranks: Vec<usize> = (0..=len).map(|j| d.complex().module(j).rank()).collect();
    let mut offsets = Vec::new();
    let modules: Vec<Arc<GradedFreeBimodule>> = (0..=len)
        .map(|n| {
            let mut gens = Vec::new();
            let mut offs = Vec::new();
            for i in 0..=n {
                let j = n - i;
                offs.push(gens.len());
                for x in c.module(i).generators() {
                    for _ in 0..d_ranks[j] {
                        gens.push(Generator { degree: j, grade: x.grade });
                    }
                }
            }
            offsets.push(offs);
            Arc::new(GradedFreeBimodule::new(ring.clone(), gens))
        })
        .collect();
    let gen_of = |n: usize, i: usize, x: usize, y: usize| offsets[n][i] + x * d_ranks[n - i] + y;

    let field = ring.field();
    let e = group.identity();
    let mut dh = Vec::new();
    let mut dv = Vec::new();
    for n in 1..=len {
        let target = &modules[n - 1];
        let mut h_images = Vec::new();
        let mut v_images = Vec::new();
        for i in 0..=n {
            let j = n - i;
            let cm = c.module(i);
            for (x, xg) in cm.generators().iter().enumerate() {
                for y in 0..d_ranks[j] {
                    // d^h: C-image Σ c g1⊗x'⊗g2 gives Σ c g1 ⊗ x' ⊗ ^{g2}y ⊗ g2
                    let mut acc = Accumulator::new();
                    if i > 0 && j <= ring.max_degree() {
                        for (idx, coef) in c.differential(i).image(x) {
                            let t = cm_term(c, i - 1, *idx);
                            let g1 = c_ring.grade(t.left.1);
                            let g2 = c_ring.grade(t.right.1);
                            for (y2, cy) in d.act_generator(g2, j, y) {
                                let gen = gen_of(n - 1, i - 1, t.gen, *y2);
                                let at = Term {
                                    left: ring.group_element(g1),
                                    gen,
                                    right: ring.group_element(g2),
                                };
                                acc.add(target.index(at), &(coef * cy));
                            }
                        }
                    }
                    h_images.push(acc.finish());

                    // d^v: D-image Σ c s1⊗y'⊗s2 gives (−1)^i Σ c ^h s1 ⊗ x ⊗ y' ⊗ s2, h = |x|
                    let mut acc = Accumulator::new();
                    if j > 0 {
                        let sign = if i % 2 == 1 && !opts.corrupt_vertical_sign {
                            field.from_i64(-1)
                        } else {
                            field.one()
                        };
                        let dm = d.complex().module(j - 1);
                        for (idx, coef) in d.complex().differential(j).image(y) {
                            let t = dm.term(j, *idx);
                            let gen = gen_of(n - 1, i, x, t.gen);
                            let right = (t.right.0, ring.index(t.right.1, e));
                            let cs = &sign * coef;
                            for (s, cl) in ring.act_s(xg.grade, t.left.0, t.left.1) {
                                let at = Term {
                                    left: (t.left.0, ring.index(*s, e)),
                                    gen,
                                    right,
                                };
                                acc.add(target.index(at), &(&cs * cl));
                            }
                        }
                    }
                    v_images.push(acc.finish());
                }
            }
        }
        dh.push(BimoduleMap::new(modules[n].clone(), target.clone(), h_images));
        dv.push(BimoduleMap::new(modules[n].clone(), target.clone(), v_images));
    }
    let diffs = dh.iter().zip(&dv).map(|(h, v)| h.add(v)).collect();
    let x = BiComplexX {
        ring,
        c_ranks,
        d_ranks,
        components: (0..=len).map(|j| d.component(j).basis_vectors()).collect(),
        offsets,
        total: TruncatedComplex::new(modules, diffs),
        dh,
        dv,
    };
    if !opts.unchecked {
        if let Some((which, n)) = x.identity_failure() {
            return Err(Error::HypothesisViolation(format!(
                "bicomplex identity {which:?} fails at total degree {n}"
            )));
        }
    }
    Ok(x)
}

fn cm_term(c: &TruncatedComplex, i: usize, idx: usize) -> Term {
    c.module(i).term(0, idx)
}

impl BiComplexX {
    pub fn ring(&self) -> &Arc<GradedSkewAlgebra> {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.total.len()
    }

    pub fn is_empty(&self) -> bool {
        self.total.is_empty()
    }

    pub fn total(&self) -> &TruncatedComplex {
        &self.total
    }

    /// `d^h` and `d^v` on `X_n`, as maps into `X_{n−1}`.
    pub fn horizontal(&self, n: usize) -> &BimoduleMap {
        &self.dh[n - 1]
    }

    pub fn vertical(&self, n: usize) -> &BimoduleMap {
        &self.dv[n - 1]
    }

    /// Basis of `K^j` labelling the generators of `D_j'`.
    pub fn d_component(&self, j: usize) -> &[Vec<Scalar>] {
        &self.components[j]
    }

    /// `rank X_{i,j} = rank C_i' · rank D_j'`.
    pub fn piece_rank(&self, i: usize, j: usize) -> usize {
        self.c_ranks[i] * self.d_ranks[j]
    }

    /// Generator range of `X_{i,j}` inside `X_{i+j}`.
    pub fn piece(&self, i: usize, j: usize) -> std::ops::Range<usize> {
        let start = self.offsets[i + j][i];
        start..start + self.piece_rank(i, j)
    }

    /// Generator of `X_{i,j}` for the pair `(x, y)`.
    pub fn generator(&self, i: usize, j: usize, x: usize, y: usize) -> usize {
        self.offsets[i + j][i] + x * self.d_ranks[j] + y
    }

    /// Checks `d^h d^h = 0`, `d^v d^v = 0` and `d^h d^v + d^v d^h = 0` on
    /// generators, which forces them on every piece.
    pub fn identity_failure(&self) -> Option<(BicomplexIdentity, usize)> {
        for n in 2..=self.len() {
            let (h1, h2) = (self.horizontal(n - 1), self.horizontal(n));
            let (v1, v2) = (self.vertical(n - 1), self.vertical(n));
            if !h1.compose(h2).is_zero() {
                return Some((BicomplexIdentity::HorizontalSquare, n));
            }
            if !v1.compose(v2).is_zero() {
                return Some((BicomplexIdentity::VerticalSquare, n));
            }
            if !h1.compose(v2).add(&v1.compose(h2)).is_zero() {
                return Some((BicomplexIdentity::Anticommute, n));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FiniteGroup, Representation};
    use crate::linear::FieldSpec;
    use crate::par::Exec;
    use crate::pbw::{symmetric_relations, HomQuadraticPresentation};
    use crate::resolution::{bar_resolution_kg, homology_dims, koszul_resolution, periodic_resolution_cyclic};

    fn jordan(p: usize, len: usize, cap: usize) -> KoszulResolution {
        let f = FieldSpec::Prime(p as u32);
        let rep = Representation::cyclic_jordan(f, p).unwrap();
        let hom = HomQuadraticPresentation::new(rep, symmetric_relations(f, 2)).unwrap();
        koszul_resolution(&hom, len, cap).unwrap()
    }

    #[test]
    fn cyclic_example_is_a_resolution() {
        let d = jordan(3, 3, 3);
        let c = periodic_resolution_cyclic(3, FieldSpec::Prime(3), 3);
        let x = build_x(&c, &d, 3).unwrap();
        assert_eq!((x.piece_rank(2, 0), x.piece_rank(1, 1), x.piece_rank(0, 2)), (1, 2, 1));
        let h = homology_dims(x.total(), 2, 3, Exec::default());
        assert!(h.exact, "{:?}", h.failures());
        assert_eq!(h.get(0, 2).homology, 9);
    }

    #[test]
    fn bar_factor_also_works() {
        let d = jordan(2, 2, 2);
        let c = bar_resolution_kg(&FiniteGroup::cyclic(2), FieldSpec::Prime(2), 2, false);
        let x = build_x(&c, &d, 2).unwrap();
        assert_eq!(x.piece_rank(1, 1), 4);
        assert!(homology_dims(x.total(), 1, 2, Exec::default()).exact);
    }

    #[test]
    fn corrupted_sign_breaks_anticommutation() {
        let d = jordan(3, 2, 2);
        let c = periodic_resolution_cyclic(3, FieldSpec::Prime(3), 2);
        let opts = BuildOptions {
            unchecked: true,
            corrupt_vertical_sign: true,
        };
        let x = build_x_with(&c, &d, 2, opts).unwrap();
        assert_eq!(x.identity_failure(), Some((BicomplexIdentity::Anticommute, 2)));
    }
}
