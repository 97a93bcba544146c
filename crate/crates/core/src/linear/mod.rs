//! Exact scalar arithmetic and subspace linear algebra over Q and GF(p).

pub mod field;
pub mod matrix;
pub mod sparse;
pub mod subspace;

pub use field::{FieldSpec, Scalar};
pub use matrix::{rref, solve_linear, LinearSolver, Matrix};
pub use sparse::{Accumulator, Echelon, SparseMap, SparseSolver, SparseVec};
pub use subspace::{kernel, Subspace};
