//! Exact linear algebra over GF(2).
//!
//! Vectors are packed bitsets; matrices are lists of rows. Row reduction is
//! deterministic: the pivot of a row is its leftmost set bit, and reduced
//! forms are unique for a given span.

mod bitvec;
mod matrix;
mod solve;

pub use bitvec::{BitVec, Ones};
pub use matrix::BitMatrix;
pub use solve::{solve_linear, EchelonBasis, LinearSystem, SolutionSet};
