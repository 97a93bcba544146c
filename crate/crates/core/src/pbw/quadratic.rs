//! The homogeneous quadratic algebra `S = T(V)/⟨R'⟩`, one graded piece at a time.

use std::collections::HashMap;

use crate::group::index_word;
use crate::linear::sparse::Accumulator;
use crate::linear::{Echelon, FieldSpec, Scalar, SparseVec, Subspace};

struct Piece {
    ideal: Echelon,
    /// Normal words (word indices not occurring as pivots), ascending.
    normal: Vec<usize>,
    position: HashMap<usize, usize>,
}

/// Graded pieces `S_0, …, S_max` with a canonical monomial basis.
///
/// The ideal `I_d = Σ_j V^{⊗j} ⊗ R' ⊗ V^{⊗(d-2-j)}` is echelonised with the
/// largest word of each row as pivot; the remaining words form the basis of `S_d`.
pub struct QuadraticAlgebra {
    field: FieldSpec,
    dim_v: usize,
    rprime: Subspace,
    pieces: Vec<Piece>,
}

impl QuadraticAlgebra {
    pub fn new(dim_v: usize, rprime: &Subspace, max_degree: usize) -> Self {
        assert_eq!(rprime.ambient_dim(), dim_v * dim_v, "R' lives in V⊗V");
        let mut alg = QuadraticAlgebra {
            field: rprime.field(),
            dim_v,
            rprime: rprime.clone(),
            pieces: Vec::new(),
        };
        alg.extend_to(max_degree);
        alg
    }

    fn extend_to(&mut self, max_degree: usize) {
        let n = self.dim_v;
        let rel: Vec<SparseVec> = self
            .rprime
            .basis_vectors()
            .iter()
            .map(|v| crate::linear::sparse::from_dense(v))
            .collect();
        for d in self.pieces.len()..=max_degree {
            let mut ideal = Echelon::new(self.field);
            if d >= 2 {
                for j in 0..=d - 2 {
                    let right = n.pow((d - 2 - j) as u32);
                    for a in 0..n.pow(j as u32) {
                        for r in &rel {
                            for b in 0..right {
                                let v = r
                                    .iter()
                                    .map(|(i, c)| ((a * n * n + i) * right + b, c.clone()))
                                    .collect();
                                ideal.insert(v);
                            }
                        }
                    }
                }
            }
            let pivots: std::collections::HashSet<usize> = ideal.pivots().into_iter().collect();
            let normal: Vec<usize> = (0..n.pow(d as u32)).filter(|w| !pivots.contains(w)).collect();
            let position = normal.iter().enumerate().map(|(i, &w)| (w, i)).collect();
            self.pieces.push(Piece {
                ideal,
                normal,
                position,
            });
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn rprime(&self) -> &Subspace {
        &self.rprime
    }

    pub fn max_degree(&self) -> usize {
        self.pieces.len() - 1
    }

    pub fn dim(&self, d: usize) -> usize {
        self.pieces[d].normal.len()
    }

    /// Word index (in `V^{⊗d}`) of the `i`-th basis element of `S_d`.
    pub fn basis_word(&self, d: usize, i: usize) -> usize {
        self.pieces[d].normal[i]
    }

    pub fn basis_letters(&self, d: usize, i: usize) -> Vec<usize> {
        index_word(self.pieces[d].normal[i], d, self.dim_v)
    }

    /// Image in `S_d` of a tensor in `V^{⊗d}`, as coordinates on the normal basis.
    pub fn reduce(&self, d: usize, v: SparseVec) -> SparseVec {
        let piece = &self.pieces[d];
        let r = piece.ideal.reduce_full(v);
        let mut out: SparseVec = r
            .into_iter()
            .map(|(w, c)| (piece.position[&w], c))
            .collect();
        out.sort_by_key(|(i, _)| *i);
        out
    }

    pub fn reduce_word(&self, word: &[usize]) -> SparseVec {
        let idx = crate::group::word_index(word, self.dim_v);
        self.reduce(word.len(), vec![(idx, self.field.one())])
    }

    /// Product of two basis elements `S_{d1} × S_{d2} → S_{d1+d2}`.
    pub fn multiply_basis(&self, d1: usize, i: usize, d2: usize, j: usize) -> SparseVec {
        let shift = self.dim_v.pow(d2 as u32);
        let w = self.pieces[d1].normal[i] * shift + self.pieces[d2].normal[j];
        self.reduce(d1 + d2, vec![(w, self.field.one())])
    }

    /// Product of a general element of `S_{d1}` with one of `S_{d2}`.
    pub fn multiply(&self, d1: usize, a: &[(usize, Scalar)], d2: usize, b: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Accumulator::new();
        for (i, x) in a {
            for (j, y) in b {
                acc.add_scaled(&self.multiply_basis(d1, *i, d2, *j), &(x * y));
            }
        }
        acc.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn commutators(f: FieldSpec, n: usize) -> Subspace {
        let mut vecs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let mut v = vec![f.zero(); n * n];
                v[i * n + j] = f.one();
                v[j * n + i] = f.from_i64(-1);
                vecs.push(v);
            }
        }
        Subspace::span(f, n * n, vecs).unwrap()
    }

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn polynomial_ring_dims() {
        for n in [2, 3] {
            let s = QuadraticAlgebra::new(n, &commutators(FieldSpec::Rationals, n), 5);
            for d in 0..=5 {
                assert_eq!(s.dim(d), binomial(n + d - 1, d));
            }
        }
    }

    #[test]
    fn normal_words_are_sorted_monomials() {
        let s = QuadraticAlgebra::new(2, &commutators(FieldSpec::Prime(3), 2), 3);
        // Normal words are the smallest word in each commutation class: x…xy…y.
        let words: Vec<Vec<usize>> = (0..s.dim(3)).map(|i| s.basis_letters(3, i)).collect();
        assert_eq!(words, vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 1, 1], vec![1, 1, 1]]);
        // yx reduces to xy
        assert_eq!(s.reduce_word(&[1, 0]), vec![(1, FieldSpec::Prime(3).one())]);
    }

    #[test]
    fn multiplication_is_associative_and_commutative() {
        let s = QuadraticAlgebra::new(3, &commutators(FieldSpec::Rationals, 3), 4);
        let one = FieldSpec::Rationals.one();
        for i in 0..s.dim(1) {
            for j in 0..s.dim(1) {
                assert_eq!(s.multiply_basis(1, i, 1, j), s.multiply_basis(1, j, 1, i));
                for k in 0..s.dim(2) {
                    let ab = s.multiply_basis(1, i, 1, j);
                    let left = s.multiply(2, &ab, 2, &[(k, one.clone())]);
                    let bc = s.multiply_basis(1, j, 2, k);
                    let right = s.multiply(1, &[(i, one.clone())], 3, &bc);
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn free_and_truncated_extremes() {
        let f = FieldSpec::Rationals;
        let s = QuadraticAlgebra::new(2, &Subspace::zero(f, 4), 3);
        assert_eq!((0..=3).map(|d| s.dim(d)).collect::<Vec<_>>(), vec![1, 2, 4, 8]);
        let s = QuadraticAlgebra::new(2, &Subspace::full(f, 4), 3);
        assert_eq!((0..=3).map(|d| s.dim(d)).collect::<Vec<_>>(), vec![1, 2, 0, 0]);
    }
}
