use std::fmt;

use super::field::{FieldSpec, Scalar};
use crate::error::{Error, Result};

/// Dense matrix over an exact field, row-major. Acts on column vectors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds from row vectors; every row must have length `cols`.
    pub fn from_rows(field: FieldSpec, cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has length {}, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r);
        }
        Ok(Matrix {
            field,
            rows: n,
            cols,
            data,
        })
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(field: FieldSpec, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        Self::from_rows(field, cols, rows).expect("ragged integer matrix")
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * rhs.cols + j;
                        out.data[idx] = &out.data[idx] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `M * v` for a column vector `v`.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|r| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        let b = rhs.get(k, l);
                        if !b.is_zero() {
                            out.set(i * rhs.rows + k, j * rhs.cols + l, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    /// Reduced row-echelon form with zero rows dropped, plus the pivot columns.
    pub fn rref_with_pivots(&self) -> (Matrix, Vec<usize>) {
        let (rows, pivots) = rref_rows(self.field, self.cols, self.row_vecs());
        let m = Matrix::from_rows(self.field, self.cols, rows).expect("rref shape");
        (m, pivots)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (c, x) in self.row(r).iter().enumerate() {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Reduced row-echelon form of `m` with zero rows dropped, and its rank.
pub fn rref(m: &Matrix) -> (Matrix, usize) {
    let (r, pivots) = m.rref_with_pivots();
    (r, pivots.len())
}

pub(crate) fn rref_rows(
    field: FieldSpec,
    cols: usize,
    mut rows: Vec<Vec<Scalar>>,
) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    if let FieldSpec::Prime(p) = field {
        return rref_rows_mod(p, cols, rows);
    }
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(pr) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = rows[rank][c].inv();
        for x in rows[rank].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        pivots.push(c);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    (rows, pivots)
}

fn rref_rows_mod(p: u32, cols: usize, rows: Vec<Vec<Scalar>>) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let pm = p as u64;
    let mut rows: Vec<Vec<u64>> = rows
        .into_iter()
        .map(|r| r.iter().map(|s| s.residue().expect("prime field") as u64).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(pr) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = super::field::pow_mod(rows[rank][c], pm - 2, pm);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % pm;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[c] == 0 {
                continue;
            }
            let f = pm - row[c];
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if *y != 0 {
                    *x = (*x + f * y) % pm;
                }
            }
        }
        pivots.push(c);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    let field = FieldSpec::Prime(p);
    let rows = rows
        .into_iter()
        .map(|r| r.into_iter().map(|x| field.from_i64(x as i64)).collect())
        .collect();
    (rows, pivots)
}

/// One solution of `A x = b` (free variables set to zero).
pub fn solve_linear(a: &Matrix, b: &[Scalar]) -> Result<Vec<Scalar>> {
    LinearSolver::new(a).solve(b)
}

/// Factors `A` once so that many right-hand sides can be solved.
///
/// Solutions are the pivot solutions of the reduced system: every free
/// variable is zero.
#[derive(Clone, Debug)]
pub struct LinearSolver {
    field: FieldSpec,
    cols: usize,
    /// `transform * A = rref(A)` (including zero rows at the bottom).
    transform: Matrix,
    pivots: Vec<usize>,
}

impl LinearSolver {
    pub fn new(a: &Matrix) -> Self {
        let field = a.field();
        let m = a.rows();
        let n = a.cols();
        let rows: Vec<Vec<Scalar>> = (0..m)
            .map(|r| {
                let mut row = a.row(r).to_vec();
                row.extend((0..m).map(|c| if c == r { field.one() } else { field.zero() }));
                row
            })
            .collect();
        let (reduced, all_pivots) = rref_rows(field, n + m, rows);
        // Pivots in the identity block mark dependent rows of A; rows with such
        // pivots give the consistency conditions.
        let pivots: Vec<usize> = all_pivots.iter().copied().filter(|&c| c < n).collect();
        let mut t_rows: Vec<Vec<Scalar>> = reduced.iter().map(|r| r[n..].to_vec()).collect();
        while t_rows.len() < m {
            // Only happens for m = 0 rows; keeps the transform square in general.
            t_rows.push(vec![field.zero(); m]);
        }
        let transform = Matrix::from_rows(field, m, t_rows).expect("transform shape");
        LinearSolver {
            field,
            cols: n,
            transform,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn solve(&self, b: &[Scalar]) -> Result<Vec<Scalar>> {
        if b.len() != self.transform.cols() {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has length {}, expected {}",
                b.len(),
                self.transform.cols()
            )));
        }
        let c = self.transform.apply(b);
        let r = self.pivots.len();
        if c[r..].iter().any(|x| !x.is_zero()) {
            return Err(Error::InconsistentSystem);
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (i, &pc) in self.pivots.iter().enumerate() {
            x[pc] = c[i].clone();
        }
        Ok(x)
    }
}
