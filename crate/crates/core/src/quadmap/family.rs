use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::QuadraticMap;
use crate::gf2::{solve_linear, BitMatrix, BitVec};
use crate::{Error, Result};

/// Matrix Lie algebras over `F_2` carrying `Q(A) = A² + A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    /// All `n × n` matrices.
    Gl,
    /// Trace-zero matrices.
    Sl,
    /// Strictly upper triangular matrices.
    U,
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gl" => Ok(Self::Gl),
            "sl" => Ok(Self::Sl),
            "u" => Ok(Self::U),
            other => Err(Error::InvalidMap(format!("unknown family '{other}', expected gl, sl or u"))),
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Gl => "gl",
            Self::Sl => "sl",
            Self::U => "u",
        })
    }
}

/// Row-major `size × size` matrix product.
fn mat_mul(a: &BitVec, b: &BitVec, size: usize) -> BitVec {
    let mut out = BitVec::zeros(size * size);
    for i in 0..size {
        for k in 0..size {
            if a.get(i * size + k) {
                for j in 0..size {
                    if b.get(k * size + j) {
                        out.flip(i * size + j);
                    }
                }
            }
        }
    }
    out
}

/// Basis of the matrix space, in row-major order of the admissible
/// positions. For `sl`, the diagonal position `(i, i)` with `i < size - 1`
/// holds `e_ii + e_{i+1,i+1}`.
fn basis(kind: FamilyKind, size: usize) -> Vec<BitVec> {
    let unit = |i: usize, j: usize| BitVec::unit(size * size, i * size + j);
    let mut out = Vec::new();
    for i in 0..size {
        for j in 0..size {
            match kind {
                FamilyKind::Gl => out.push(unit(i, j)),
                FamilyKind::U if i < j => out.push(unit(i, j)),
                FamilyKind::Sl if i != j => out.push(unit(i, j)),
                FamilyKind::Sl if i + 1 < size => out.push(&unit(i, i) ^ &unit(i + 1, i + 1)),
                _ => {}
            }
        }
    }
    out
}

/// `Q(A) = A² + A` on the named matrix space, in the row-major basis.
pub fn family(kind: FamilyKind, size: usize) -> Result<QuadraticMap> {
    if size == 0 {
        return Err(Error::InvalidMap("matrix size must be at least 1".into()));
    }
    let basis = basis(kind, size);
    let dim = basis.len();
    let mut values = Vec::new();
    for a in &basis {
        values.push(&mat_mul(a, a, size) ^ a);
    }
    for i in 0..dim {
        for j in i + 1..dim {
            values.push(&mat_mul(&basis[i], &basis[j], size) ^ &mat_mul(&basis[j], &basis[i], size));
        }
    }
    let coeffs = BitMatrix::from_columns(&basis, size * size);
    let rhs = BitMatrix::from_columns(&values, size * size);
    let sol = solve_linear(&coeffs, &rhs).map_err(|_| Error::Internal(format!("{kind}_{size} is not closed under A² + A")))?;
    let mut col = (0..values.len()).map(|c| sol.particular_column(c));
    let q_vals: Vec<BitVec> = (0..dim).map(|_| col.next().unwrap()).collect();
    let mut pairs = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            pairs.push(((i, j), col.next().unwrap()));
        }
    }
    QuadraticMap::new(dim, dim, q_vals, pairs)
}
