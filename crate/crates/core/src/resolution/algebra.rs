//! `A = S#G` for a homogeneous quadratic `S`, kept as graded pieces up to a cap.

use std::sync::Arc;

use crate::group::{word_index, FiniteGroup};
use crate::linear::sparse::Accumulator;
use crate::linear::{FieldSpec, Matrix, Scalar, SparseVec, Subspace};
use crate::pbw::{HomQuadraticPresentation, QuadraticAlgebra};

/// A homogeneous basis element of `A`: polynomial degree and index in `A_degree`.
pub type Basis = (usize, usize);

/// The graded algebra `A = S#G` truncated at `max_degree`.
///
/// `A_d` has basis `s_i ⊗ g` at index `i·|G| + g`, where `s_i` runs over the
/// normal-word basis of `S_d`. The group algebra kG is the case `dim V = 0` and
/// `S` itself the case of the trivial group.
pub struct GradedSkewAlgebra {
    field: FieldSpec,
    group: Arc<FiniteGroup>,
    dim_v: usize,
    max_degree: usize,
    s_dims: Vec<usize>,
    s_words: Vec<Vec<Vec<usize>>>,
    /// `s_table[d1][d2][i * s_dims[d2] + j] = s_i s_j`, for `d1 + d2 ≤ max_degree`.
    s_table: Vec<Vec<Vec<SparseVec>>>,
    /// `action[g][d][i] = ^g s_i`.
    action: Vec<Vec<Vec<SparseVec>>>,
}

impl GradedSkewAlgebra {
    fn build(
        field: FieldSpec,
        group: FiniteGroup,
        matrices: &[Matrix],
        dim_v: usize,
        rprime: &Subspace,
        max_degree: usize,
    ) -> Self {
        let s = QuadraticAlgebra::new(dim_v, rprime, max_degree);
        let s_dims: Vec<usize> = (0..=max_degree).map(|d| s.dim(d)).collect();
        let s_words: Vec<Vec<Vec<usize>>> = (0..=max_degree)
            .map(|d| (0..s_dims[d]).map(|i| s.basis_letters(d, i)).collect())
            .collect();
        let s_table = (0..=max_degree)
            .map(|d1| {
                (0..=max_degree - d1)
                    .map(|d2| {
                        let mut out = Vec::with_capacity(s_dims[d1] * s_dims[d2]);
                        for i in 0..s_dims[d1] {
                            for j in 0..s_dims[d2] {
                                out.push(s.multiply_basis(d1, i, d2, j));
                            }
                        }
                        out
                    })
                    .collect()
            })
            .collect();
        let action = group
            .elements()
            .map(|g| {
                (0..=max_degree)
                    .map(|d| {
                        s_words[d]
                            .iter()
                            .map(|w| s.reduce(d, act_word(field, &matrices[g], dim_v, w)))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        GradedSkewAlgebra {
            field,
            group: Arc::new(group),
            dim_v,
            max_degree,
            s_dims,
            s_words,
            s_table,
            action,
        }
    }

    /// `S#G` for `S = T(V)/⟨R'⟩` with the group acting through `hom.rep`.
    pub fn skew(hom: &HomQuadraticPresentation, max_degree: usize) -> Self {
        let rep = &hom.rep;
        Self::build(
            rep.field(),
            rep.group().clone(),
            rep.matrices(),
            rep.dim(),
            &hom.rprime,
            max_degree,
        )
    }

    /// `S = T(V)/⟨R'⟩` with no group.
    pub fn quadratic(field: FieldSpec, dim_v: usize, rprime: &Subspace, max_degree: usize) -> Self {
        let id = vec![Matrix::identity(field, dim_v)];
        Self::build(field, FiniteGroup::trivial(), &id, dim_v, rprime, max_degree)
    }

    /// The group algebra `kG`, concentrated in degree 0.
    pub fn group_algebra(group: FiniteGroup, field: FieldSpec) -> Self {
        let id = vec![Matrix::identity(field, 0); group.order()];
        Self::build(field, group, &id, 0, &Subspace::zero(field, 0), 0)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn s_dim(&self, d: usize) -> usize {
        self.s_dims.get(d).copied().unwrap_or(0)
    }

    /// `dim A_d`; zero above the cap.
    pub fn dim(&self, d: usize) -> usize {
        self.s_dim(d) * self.order()
    }

    pub fn s_word(&self, d: usize, i: usize) -> &[usize] {
        &self.s_words[d][i]
    }

    /// Index in `A_d` of `s ⊗ g`.
    pub fn index(&self, s: usize, g: usize) -> usize {
        s * self.order() + g
    }

    pub fn grade(&self, idx: usize) -> usize {
        idx % self.order()
    }

    pub fn s_part(&self, idx: usize) -> usize {
        idx / self.order()
    }

    /// `1 ⊗ g ∈ A_0`.
    pub fn group_element(&self, g: usize) -> Basis {
        (0, self.index(0, g))
    }

    /// `v_a ⊗ 1 ∈ A_1`.
    pub fn letter(&self, a: usize) -> Basis {
        let s = self.s_words[1]
            .iter()
            .position(|w| w[0] == a)
            .expect("every letter is a normal word of degree 1");
        (1, self.index(s, self.group.identity()))
    }

    /// Index in `S_d` of a normal word, if it is one.
    pub fn s_index_of_word(&self, word: &[usize]) -> Option<usize> {
        let d = word.len();
        self.s_words.get(d)?.iter().position(|w| w == word)
    }

    /// `^g s_i` in `S_d`.
    pub fn act_s(&self, g: usize, d: usize, i: usize) -> &SparseVec {
        &self.action[g][d][i]
    }

    /// `s_i s_j` in `S_{d1+d2}`.
    pub fn multiply_s(&self, d1: usize, i: usize, d2: usize, j: usize) -> &SparseVec {
        &self.s_table[d1][d2][i * self.s_dims[d2] + j]
    }

    /// `(s_i ⊗ g)(s_j ⊗ h) = s_i (^g s_j) ⊗ gh` in `A_{d1+d2}`; empty above the cap.
    pub fn multiply_basis(&self, (d1, x): Basis, (d2, y): Basis) -> SparseVec {
        if d1 + d2 > self.max_degree {
            return Vec::new();
        }
        let (i, g) = (self.s_part(x), self.grade(x));
        let (j, h) = (self.s_part(y), self.grade(y));
        let gh = self.group.mul(g, h);
        let mut acc = Accumulator::new();
        for (t, c) in &self.action[g][d2][j] {
            for (u, c2) in self.multiply_s(d1, i, d2, *t) {
                acc.add(self.index(*u, gh), &(c * c2));
            }
        }
        acc.finish()
    }

    /// Product of general homogeneous elements.
    pub fn multiply(&self, d1: usize, x: &[(usize, Scalar)], d2: usize, y: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Accumulator::new();
        for (i, a) in x {
            for (j, b) in y {
                acc.add_scaled(&self.multiply_basis((d1, *i), (d2, *j)), &(a * b));
            }
        }
        acc.finish()
    }

    /// `^g` on `A_d`, i.e. conjugation `g (s⊗h) g⁻¹ = ^g s ⊗ ghg⁻¹`.
    pub fn conjugate(&self, g: usize, d: usize, idx: usize) -> SparseVec {
        let (i, h) = (self.s_part(idx), self.grade(idx));
        let ghg = self.group.conj(g, h);
        let mut out: SparseVec = self.action[g][d][i]
            .iter()
            .map(|(t, c)| (self.index(*t, ghg), c.clone()))
            .collect();
        out.sort_by_key(|(i, _)| *i);
        out
    }
}

/// Letterwise action of a matrix on a word, in `V^{⊗len}` word-index coordinates.
fn act_word(field: FieldSpec, m: &Matrix, dim_v: usize, word: &[usize]) -> SparseVec {
    let mut acc: Vec<(Vec<usize>, Scalar)> = vec![(Vec::new(), field.one())];
    for &l in word {
        let mut next = Vec::new();
        for (w, c) in &acc {
            for r in 0..dim_v {
                let x = m.get(r, l);
                if !x.is_zero() {
                    let mut w2 = w.clone();
                    w2.push(r);
                    next.push((w2, c * x));
                }
            }
        }
        acc = next;
    }
    let mut out = Accumulator::new();
    for (w, c) in acc {
        out.add(word_index(&w, dim_v), &c);
    }
    out.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Representation;
    use crate::pbw::symmetric_relations;

    fn jordan(p: u32, max: usize) -> GradedSkewAlgebra {
        let f = FieldSpec::Prime(p);
        let rep = Representation::cyclic_jordan(f, p as usize).unwrap();
        let hom = HomQuadraticPresentation::new(rep, symmetric_relations(f, 2)).unwrap();
        GradedSkewAlgebra::skew(&hom, max)
    }

    #[test]
    fn dimensions() {
        let a = jordan(3, 4);
        assert_eq!((0..=4).map(|d| a.dim(d)).collect::<Vec<_>>(), vec![3, 6, 9, 12, 15]);
        let kg = GradedSkewAlgebra::group_algebra(FiniteGroup::cyclic(4), FieldSpec::Rationals);
        assert_eq!((kg.dim(0), kg.dim(1)), (4, 0));
    }

    #[test]
    fn skew_commutation() {
        // g v2 = (v1 + v2) g
        let a = jordan(3, 2);
        let one = FieldSpec::Prime(3).one();
        let g = a.group_element(1);
        let (v1, v2) = (a.letter(0), a.letter(1));
        let lhs = a.multiply_basis(g, v2);
        let mut rhs = a.multiply_basis(v1, g);
        rhs.extend(a.multiply_basis(v2, g));
        rhs.sort_by_key(|(i, _)| *i);
        assert_eq!(lhs, rhs);
        assert!(lhs.iter().all(|(_, c)| *c == one));
    }

    #[test]
    fn associativity() {
        let a = jordan(3, 3);
        for d1 in 0..=1 {
            for d2 in 0..=1 {
                for d3 in 0..=1 {
                    for x in 0..a.dim(d1) {
                        for y in 0..a.dim(d2) {
                            for z in 0..a.dim(d3) {
                                let xy = a.multiply_basis((d1, x), (d2, y));
                                let yz = a.multiply_basis((d2, y), (d3, z));
                                let one = [(z, a.field().one())];
                                let left = a.multiply(d1 + d2, &xy, d3, &one);
                                let right = a.multiply(d1, &[(x, a.field().one())], d2 + d3, &yz);
                                assert_eq!(left, right);
                            }
                        }
                    }
                }
            }
        }
    }
}
