//! The graded polynomial algebra `F_2[x_1, ..., x_m]` with its Bockstein
//! derivation, plus the text grammar used everywhere for I/O.
//!
//! Variables are 0-based internally and 1-based in text.

mod matrix;
mod monomial;
mod parse;
mod polynomial;

pub use matrix::PolyMatrix;
pub use monomial::Monomial;
pub use parse::parse_poly;
pub use polynomial::Poly;

use crate::Result;

/// Parse a column of polynomials, one string per entry.
pub fn parse_column<S: AsRef<str>>(items: &[S], nvars: usize) -> Result<Vec<Poly>> {
    items.iter().map(|s| parse_poly(s.as_ref(), nvars)).collect()
}

/// Entrywise Bockstein of a column.
pub fn bockstein_column(v: &[Poly]) -> Vec<Poly> {
    v.iter().map(Poly::bockstein).collect()
}
