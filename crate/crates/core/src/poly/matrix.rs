use std::fmt;

use super::Poly;
use crate::gf2::{BitMatrix, BitVec};
use crate::{Error, Result};

/// A rectangular grid of polynomials, all over the same variables.
///
/// Matrices such as `L` and `R` have degree-1 entries; they are
/// interchangeable with their list of coefficient matrices, one scalar
/// matrix per variable (see [`PolyMatrix::linear_parts`]).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    nvars: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize, nvars: usize) -> Self {
        Self {
            rows,
            cols,
            nvars,
            entries: vec![Poly::zero(nvars); rows * cols],
        }
    }

    pub fn identity(n: usize, nvars: usize) -> Self {
        let mut m = Self::zeros(n, n, nvars);
        for i in 0..n {
            m.set(i, i, Poly::one(nvars));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Poly>>, nvars: usize) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(nrows * ncols);
        for r in rows {
            if r.len() != ncols {
                return Err(Error::DimensionMismatch {
                    what: "polynomial matrix row length".into(),
                    expected: ncols,
                    found: r.len(),
                });
            }
            for p in r {
                if p.nvars() != nvars {
                    return Err(Error::DimensionMismatch {
                        what: "polynomial matrix entry variables".into(),
                        expected: nvars,
                        found: p.nvars(),
                    });
                }
                entries.push(p);
            }
        }
        Ok(Self {
            rows: nrows,
            cols: ncols,
            nvars,
            entries,
        })
    }

    /// Constant matrix.
    pub fn scalar(m: &BitMatrix, nvars: usize) -> Self {
        let mut out = Self::zeros(m.nrows(), m.ncols(), nvars);
        for i in 0..m.nrows() {
            for j in m.row(i).ones() {
                out.set(i, j, Poly::one(nvars));
            }
        }
        out
    }

    /// `Σ_k parts[k] · x_k`.
    pub fn from_linear_parts(parts: &[BitMatrix], rows: usize, cols: usize) -> Self {
        let nvars = parts.len();
        let mut out = Self::zeros(rows, cols, nvars);
        for (k, part) in parts.iter().enumerate() {
            assert_eq!((part.nrows(), part.ncols()), (rows, cols));
            for i in 0..rows {
                for j in part.row(i).ones() {
                    let e = out.get(i, j) + &Poly::var(nvars, k);
                    out.set(i, j, e);
                }
            }
        }
        out
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        assert_eq!(p.nvars(), self.nvars);
        self.entries[i * self.cols + j] = p;
    }

    pub fn row(&self, i: usize) -> &[Poly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    /// Every entry zero or homogeneous of degree `d`.
    pub fn is_homogeneous_of(&self, d: usize) -> bool {
        self.entries.iter().all(|p| p.is_homogeneous_of(d))
    }

    /// `M · v` for a column of polynomials.
    pub fn apply(&self, v: &[Poly]) -> Result<Vec<Poly>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                what: "matrix applied to column".into(),
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Poly::zero(self.nvars);
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                what: "polynomial matrix product".into(),
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols, self.nvars);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Poly::zero(self.nvars);
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch {
                what: "polynomial matrix sum".into(),
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            nvars: self.nvars,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    /// Entrywise Bockstein.
    pub fn bockstein(&self) -> Self {
        Self {
            entries: self.entries.iter().map(Poly::bockstein).collect(),
            ..self.clone()
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows, self.nvars);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Value at a point of `F_2^m`.
    pub fn eval(&self, point: &BitVec) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j).eval(point) {
                    out.set(i, j, true);
                }
            }
        }
        out
    }

    /// Coefficient matrices of a matrix of linear forms: entry `k` is the
    /// scalar matrix multiplying `x_{k+1}`. Fails if an entry is not a
    /// linear form.
    pub fn linear_parts(&self) -> Result<Vec<BitMatrix>> {
        let mut parts = vec![BitMatrix::zeros(self.rows, self.cols); self.nvars];
        for i in 0..self.rows {
            for j in 0..self.cols {
                for m in self.get(i, j).terms() {
                    if m.degree() != 1 {
                        return Err(Error::NotQuadratic(format!(
                            "entry ({}, {}) = {} is not a linear form",
                            i + 1,
                            j + 1,
                            self.get(i, j)
                        )));
                    }
                    let k = m.exponents().iter().position(|&e| e == 1).unwrap();
                    parts[k].set(i, j, true);
                }
            }
        }
        Ok(parts)
    }

    /// Rows of printed polynomials.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(Poly::to_string).collect())
            .collect()
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PolyMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(Poly::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
