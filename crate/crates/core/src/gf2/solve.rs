use super::{BitMatrix, BitVec};
use crate::{Error, Result};

/// Incrementally maintained row echelon basis.
///
/// Pivots are the leftmost set bit of each row, restricted to the first
/// `pivot_limit` columns; columns past the limit ride along (augmentation
/// bits for right-hand sides or combination tracking).
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    width: usize,
    pivot_limit: usize,
    rows: Vec<BitVec>,
    pivot_row: Vec<Option<usize>>,
}

impl EchelonBasis {
    pub fn new(width: usize) -> Self {
        Self::with_pivot_limit(width, width)
    }

    pub fn with_pivot_limit(width: usize, pivot_limit: usize) -> Self {
        assert!(pivot_limit <= width);
        Self {
            width,
            pivot_limit,
            rows: Vec::new(),
            pivot_row: vec![None; pivot_limit],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row.get(col).is_some_and(Option::is_some)
    }

    /// Pivot columns in increasing order.
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.pivot_limit).filter(|&c| self.is_pivot(c)).collect()
    }

    /// Clear every pivot column of `v`; the result is the unique
    /// representative of `v + span` that vanishes on pivot columns.
    pub fn reduce(&self, mut v: BitVec) -> BitVec {
        assert_eq!(v.len(), self.width, "vector width does not match echelon basis");
        let mut pos = 0;
        while let Some(c) = v.next_one(pos) {
            if c >= self.pivot_limit {
                break;
            }
            if let Some(r) = self.pivot_row[c] {
                v.xor_with(&self.rows[r]);
            }
            pos = c + 1;
        }
        v
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v.clone()).is_zero()
    }

    /// Adds `v` to the span. Returns `Ok(pivot)` when `v` was independent,
    /// otherwise `Err(residual)` where the residual is zero on all
    /// pivot-eligible columns.
    pub fn try_insert(&mut self, v: BitVec) -> std::result::Result<usize, BitVec> {
        let v = self.reduce(v);
        match v.first_one() {
            Some(p) if p < self.pivot_limit => {
                self.pivot_row[p] = Some(self.rows.len());
                self.rows.push(v);
                Ok(p)
            }
            _ => Err(v),
        }
    }

    /// Adds `v`; returns true if the rank grew.
    pub fn insert(&mut self, v: BitVec) -> bool {
        self.try_insert(v).is_ok()
    }

    /// Rows in reduced row echelon form, sorted by pivot.
    pub fn reduced_rows(&self) -> Vec<BitVec> {
        let mut rows: Vec<BitVec> = self.pivots().into_iter().map(|c| self.rows[self.pivot_row[c].unwrap()].clone()).collect();
        let pivots: Vec<usize> = rows.iter().map(|r| r.first_one().unwrap()).collect();
        for i in (0..rows.len()).rev() {
            let (head, tail) = rows.split_at_mut(i);
            let pivot_row = &tail[0];
            for r in head.iter_mut() {
                if r.get(pivots[i]) {
                    r.xor_with(pivot_row);
                }
            }
        }
        rows
    }
}

/// Affine solution set of `A x = b` for a matrix of right-hand sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionSet {
    /// One column per right-hand side; free variables set to zero.
    pub particular: BitMatrix,
    /// Basis of `{x : A x = 0}`, one vector per free column.
    pub kernel: Vec<BitVec>,
}

impl SolutionSet {
    pub fn particular_column(&self, j: usize) -> BitVec {
        self.particular.column(j)
    }

    pub fn is_unique(&self) -> bool {
        self.kernel.is_empty()
    }
}

/// A linear system over GF(2) fed one equation at a time.
///
/// Memory stays bounded by the rank, so systems with millions of (mostly
/// redundant) equations are fine.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    unknowns: usize,
    rhs_cols: usize,
    basis: EchelonBasis,
    inconsistent: bool,
}

impl LinearSystem {
    pub fn new(unknowns: usize, rhs_cols: usize) -> Self {
        Self {
            unknowns,
            rhs_cols,
            basis: EchelonBasis::with_pivot_limit(unknowns + rhs_cols, unknowns),
            inconsistent: false,
        }
    }

    pub fn push_equation(&mut self, coeffs: &BitVec, rhs: &BitVec) {
        assert_eq!(coeffs.len(), self.unknowns);
        assert_eq!(rhs.len(), self.rhs_cols);
        if let Err(residual) = self.basis.try_insert(coeffs.concat(rhs)) {
            if !residual.is_zero() {
                self.inconsistent = true;
            }
        }
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    pub fn solve(&self) -> Result<SolutionSet> {
        if self.inconsistent {
            return Err(Error::NoSolution);
        }
        let rows = self.basis.reduced_rows();
        let mut particular = BitMatrix::zeros(self.unknowns, self.rhs_cols);
        let mut is_pivot = vec![false; self.unknowns];
        for r in &rows {
            let p = r.first_one().unwrap();
            is_pivot[p] = true;
            for j in 0..self.rhs_cols {
                if r.get(self.unknowns + j) {
                    particular.set(p, j, true);
                }
            }
        }
        let kernel = (0..self.unknowns)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut x = BitVec::unit(self.unknowns, f);
                for r in &rows {
                    if r.get(f) {
                        x.set(r.first_one().unwrap(), true);
                    }
                }
                x
            })
            .collect();
        Ok(SolutionSet { particular, kernel })
    }
}

/// Solve `A x = b` where `b` holds one right-hand side per column.
///
/// Fails with [`Error::NoSolution`] when `rank [A | b] > rank A`.
pub fn solve_linear(a: &BitMatrix, b: &BitMatrix) -> Result<SolutionSet> {
    if a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch {
            what: "solve_linear: rows of A vs rows of b".into(),
            expected: a.nrows(),
            found: b.nrows(),
        });
    }
    let mut sys = LinearSystem::new(a.ncols(), b.ncols());
    for (ra, rb) in a.rows().iter().zip(b.rows()) {
        sys.push_equation(ra, rb);
    }
    sys.solve()
}
