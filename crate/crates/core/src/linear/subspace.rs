use super::field::{FieldSpec, Scalar};
use super::matrix::{rref_rows, Matrix};
use crate::error::{Error, Result};

/// A subspace of `k^n`, stored by its reduced row-echelon basis.
///
/// Storage is canonical, so two subspaces are equal iff they compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(field: FieldSpec, ambient_dim: usize, vectors: Vec<Vec<Scalar>>) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient_dim) {
            return Err(Error::AmbientMismatch {
                left: ambient_dim,
                right: v.len(),
            });
        }
        let (rows, pivots) = rref_rows(field, ambient_dim, vectors);
        Ok(Subspace {
            basis: Matrix::from_rows(field, ambient_dim, rows)?,
            pivots,
        })
    }

    /// Row space of a matrix.
    pub fn row_space(m: &Matrix) -> Self {
        Self::span(m.field(), m.cols(), m.row_vecs()).expect("matrix rows have consistent length")
    }

    /// Column space of a matrix.
    pub fn image(m: &Matrix) -> Self {
        Self::row_space(&m.transpose())
    }

    pub fn zero(field: FieldSpec, ambient_dim: usize) -> Self {
        Subspace {
            basis: Matrix::zeros(field, 0, ambient_dim),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: FieldSpec, ambient_dim: usize) -> Self {
        Subspace {
            basis: Matrix::identity(field, ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Span of the given standard basis vectors.
    pub fn coordinate(field: FieldSpec, ambient_dim: usize, coords: &[usize]) -> Self {
        let vecs = coords
            .iter()
            .map(|&c| unit(field, ambient_dim, c))
            .collect();
        Self::span(field, ambient_dim, vecs).expect("coordinate index in range")
    }

    pub fn field(&self) -> FieldSpec {
        self.basis.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Scalar>> {
        self.basis.row_vecs()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` modulo the subspace; the result is zero iff `v` lies in it.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.ambient_dim(), "vector length");
        let mut out = v.to_vec();
        for (i, &pc) in self.pivots.iter().enumerate() {
            if out[pc].is_zero() {
                continue;
            }
            let f = out[pc].clone();
            for (x, y) in out.iter_mut().zip(self.basis.row(i)) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis_vectors().iter().all(|v| self.contains(v))
    }

    /// Coordinates with respect to the rref basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&pc| v[pc].clone()).collect())
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::AmbientMismatch {
                left: self.ambient_dim(),
                right: other.ambient_dim(),
            });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let mut vecs = self.basis_vectors();
        vecs.extend(other.basis_vectors());
        Subspace::span(self.field(), self.ambient_dim(), vecs)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let field = self.field();
        let n = self.ambient_dim();
        let (a, b) = (self.dim(), other.dim());
        if a == 0 || b == 0 {
            return Ok(Subspace::zero(field, n));
        }
        // Columns a_1..a_a, -b_1..-b_b; a kernel vector (λ, μ) gives Σ λ_i a_i.
        let mut m = Matrix::zeros(field, n, a + b);
        for i in 0..a {
            for (r, x) in self.basis.row(i).iter().enumerate() {
                m.set(r, i, x.clone());
            }
        }
        for j in 0..b {
            for (r, x) in other.basis.row(j).iter().enumerate() {
                m.set(r, a + j, -x);
            }
        }
        let ker = kernel(&m);
        let vecs = ker
            .basis_vectors()
            .into_iter()
            .map(|kv| {
                let mut v = vec![field.zero(); n];
                for (i, lam) in kv[..a].iter().enumerate() {
                    if lam.is_zero() {
                        continue;
                    }
                    for (x, y) in v.iter_mut().zip(self.basis.row(i)) {
                        if !y.is_zero() {
                            *x += &(lam * y);
                        }
                    }
                }
                v
            })
            .collect();
        Subspace::span(field, n, vecs)
    }

    /// Image of the subspace under `m` (which maps `k^ambient` to `k^rows(m)`).
    pub fn apply_map(&self, m: &Matrix) -> Result<Subspace> {
        if m.cols() != self.ambient_dim() {
            return Err(Error::AmbientMismatch {
                left: m.cols(),
                right: self.ambient_dim(),
            });
        }
        let vecs = self.basis_vectors().iter().map(|v| m.apply(v)).collect();
        Subspace::span(self.field(), m.rows(), vecs)
    }
}

pub(crate) fn unit(field: FieldSpec, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); n];
    v[i] = field.one();
    v
}

/// Null space `{v : m v = 0}`.
pub fn kernel(m: &Matrix) -> Subspace {
    let field = m.field();
    let n = m.cols();
    let (r, pivots) = m.rref_with_pivots();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let vecs = (0..n)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![field.zero(); n];
            v[free] = field.one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(i, free);
            }
            v
        })
        .collect();
    Subspace::span(field, n, vecs).expect("kernel vectors have ambient length")
}
