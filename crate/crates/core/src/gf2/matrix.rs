use std::fmt;

use super::{BitVec, EchelonBasis};

/// A dense matrix over GF(2) stored as a list of rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: Vec<BitVec>,
    cols: usize,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows: vec![BitVec::zeros(cols); rows],
            cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: (0..n).map(|i| BitVec::unit(n, i)).collect(),
            cols: n,
        }
    }

    pub fn from_rows(rows: Vec<BitVec>, cols: usize) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length does not match column count");
        }
        Self { rows, cols }
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[BitVec], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for i in c.ones() {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn from_bits(bits: &[Vec<u8>]) -> Self {
        let cols = bits.first().map_or(0, Vec::len);
        let rows = bits
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged bit matrix");
                BitVec::from_bools(&r.iter().map(|&b| b & 1 == 1).collect::<Vec<_>>())
            })
            .collect();
        Self { rows, cols }
    }

    pub fn to_bits(&self) -> Vec<Vec<u8>> {
        self.rows
            .iter()
            .map(|r| r.to_bools().into_iter().map(u8::from).collect())
            .collect()
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value);
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> BitVec {
        let mut c = BitVec::zeros(self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            if r.get(j) {
                c.set(i, true);
            }
        }
        c
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    pub fn push_row(&mut self, row: BitVec) {
        assert_eq!(row.len(), self.cols);
        self.rows.push(row);
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols, "matrix-vector shape mismatch");
        let mut out = BitVec::zeros(self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            if r.dot(v) {
                out.set(i, true);
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.nrows(), "matrix product shape mismatch");
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc = BitVec::zeros(other.cols);
                for k in r.ones() {
                    acc.xor_with(other.row(k));
                }
                acc
            })
            .collect();
        Self {
            rows,
            cols: other.cols,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.nrows(), self.cols), (other.nrows(), other.cols));
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| a ^ b).collect();
        Self {
            rows,
            cols: self.cols,
        }
    }

    /// Stack `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Self {
            rows,
            cols: self.cols,
        }
    }

    pub fn rank(&self) -> usize {
        let mut e = EchelonBasis::new(self.cols);
        for r in &self.rows {
            e.insert(r.clone());
        }
        e.rank()
    }

    /// Basis of `{x : self * x = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<BitVec> {
        let b = Self::zeros(self.nrows(), 0);
        super::solve_linear(self, &b)
            .expect("homogeneous systems are always consistent")
            .kernel
    }

    /// Reduced row echelon form and the pivot column of each nonzero row.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut e = EchelonBasis::new(self.cols);
        for r in &self.rows {
            e.insert(r.clone());
        }
        let reduced = e.reduced_rows();
        let pivots = reduced.iter().map(|r| r.first_one().unwrap()).collect();
        (
            Self {
                rows: reduced,
                cols: self.cols,
            },
            pivots,
        )
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.nrows(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        write!(f, "]")
    }
}
