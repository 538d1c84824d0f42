//! The graded quotient `A*(Q) = F_2[x_1..x_m] / (q_1..q_n)`.
//!
//! Each degree is handled by dense row reduction over the monomials of that
//! degree, listed in descending graded-lex order. The pivot of a relation is
//! its largest monomial; the non-pivot monomials form the basis of `A^d(Q)`
//! and normal forms are supported on them.

use std::collections::HashMap;

use serde::Serialize;

use crate::gf2::{solve_linear, BitMatrix, BitVec, EchelonBasis};
use crate::poly::{Monomial, Poly};
use crate::quadmap::ExtensionClass;
use crate::{Error, Result};

/// Default truncation degree.
pub const DEFAULT_MAX_DEGREE: usize = 12;
/// Default bound on the number of monomials in a single degree.
pub const DEFAULT_MONOMIAL_CAP: usize = 4096;

#[derive(Clone, Debug)]
struct Degree {
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    relations: EchelonBasis,
    basis: Vec<usize>,
    basis_pos: HashMap<usize, usize>,
}

impl Degree {
    fn new(nvars: usize, d: usize) -> Self {
        let monomials = Monomial::all_of_degree(nvars, d);
        let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let relations = EchelonBasis::new(monomials.len());
        Self {
            monomials,
            index,
            relations,
            basis: Vec::new(),
            basis_pos: HashMap::new(),
        }
    }

    fn finish(&mut self) {
        self.basis = (0..self.monomials.len()).filter(|&c| !self.relations.is_pivot(c)).collect();
        self.basis_pos = self.basis.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    }

    fn vector(&self, f: &Poly) -> BitVec {
        let mut v = BitVec::zeros(self.monomials.len());
        for m in f.terms() {
            v.flip(self.index[m]);
        }
        v
    }

    fn poly(&self, nvars: usize, v: &BitVec) -> Poly {
        Poly::from_monomials(nvars, v.ones().map(|c| self.monomials[c].clone()))
    }
}

/// `A*(Q)` truncated at `max_degree`. Degrees past the first vanishing one
/// are known to vanish and are not stored.
#[derive(Clone, Debug)]
pub struct QuotientAlgebra {
    class: ExtensionClass,
    max_degree: usize,
    degrees: Vec<Degree>,
    vanishes_from: Option<usize>,
}

/// Serializable summary of a quotient algebra.
#[derive(Clone, Debug, Serialize)]
pub struct QuotientReport {
    pub dims: Vec<usize>,
    pub regular: bool,
    pub basis: std::collections::BTreeMap<String, Vec<String>>,
}

impl QuotientAlgebra {
    pub fn new(class: &ExtensionClass, max_degree: usize) -> Result<Self> {
        Self::with_cap(class, max_degree, DEFAULT_MONOMIAL_CAP)
    }

    /// Fails with `CapExceeded` if a degree up to `max_degree` that does
    /// not already vanish has more than `monomial_cap` monomials.
    pub fn with_cap(class: &ExtensionClass, max_degree: usize, monomial_cap: usize) -> Result<Self> {
        let m = class.nvars();
        let mut degrees: Vec<Degree> = Vec::new();
        let mut vanishes_from = None;
        for d in 0..=max_degree {
            let count = monomial_count(m, d);
            if count > monomial_cap {
                return Err(Error::CapExceeded {
                    what: format!("monomials of degree {d}"),
                    limit: monomial_cap,
                    requested: count,
                });
            }
            let mut deg = Degree::new(m, d);
            if d == 2 {
                for q in class.components() {
                    deg.relations.insert(deg.vector(q));
                }
            } else if d > 2 {
                // The ideal is generated in degree 2, so I_d = Σ_i x_i I_{d-1}.
                let prev = &degrees[d - 1];
                for row in prev.relations.rows() {
                    for i in 0..m {
                        let mut v = BitVec::zeros(deg.monomials.len());
                        for c in row.ones() {
                            v.flip(deg.index[&prev.monomials[c].times_var(i)]);
                        }
                        deg.relations.insert(v);
                    }
                }
            }
            deg.finish();
            let empty = deg.basis.is_empty();
            degrees.push(deg);
            if empty {
                vanishes_from = Some(d);
                break;
            }
        }
        Ok(Self {
            class: class.clone(),
            max_degree,
            degrees,
            vanishes_from,
        })
    }

    pub fn nvars(&self) -> usize {
        self.class.nvars()
    }

    pub fn class(&self) -> &ExtensionClass {
        &self.class
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// First degree `d` with `A^d = 0`, if reached within the truncation.
    /// All higher degrees vanish as well.
    pub fn vanishes_from(&self) -> Option<usize> {
        self.vanishes_from
    }

    pub fn is_finite(&self) -> bool {
        self.vanishes_from.is_some()
    }

    fn degree(&self, d: usize) -> Result<Option<&Degree>> {
        if let Some(v) = self.vanishes_from {
            if d >= v {
                return Ok(None);
            }
        }
        if d > self.max_degree {
            return Err(Error::TruncationExceeded {
                degree: d,
                max_degree: self.max_degree,
            });
        }
        Ok(Some(&self.degrees[d]))
    }

    pub fn dim(&self, d: usize) -> Result<usize> {
        Ok(self.degree(d)?.map_or(0, |g| g.basis.len()))
    }

    /// Normal-form basis monomials of `A^d`, in descending graded-lex order.
    pub fn basis(&self, d: usize) -> Result<Vec<Monomial>> {
        Ok(self
            .degree(d)?
            .map(|g| g.basis.iter().map(|&c| g.monomials[c].clone()).collect())
            .unwrap_or_default())
    }

    /// `dim A^d` for `d = 0..=max_degree`.
    pub fn hilbert_series(&self) -> Vec<usize> {
        (0..=self.max_degree).map(|d| self.dim(d).unwrap()).collect()
    }

    /// Canonical representative of `f` modulo the ideal, reduced one
    /// homogeneous component at a time.
    pub fn normal_form(&self, f: &Poly) -> Result<Poly> {
        self.check_vars(f)?;
        let mut out = Poly::zero(self.nvars());
        for d in component_degrees(f) {
            if let Some(g) = self.degree(d)? {
                let v = g.relations.reduce(g.vector(&f.homogeneous_part(d)));
                out += &g.poly(self.nvars(), &v);
            }
        }
        Ok(out)
    }

    /// Coordinates of a degree-`d` polynomial in the basis of `A^d`.
    /// Components of other degrees are ignored.
    pub fn coords(&self, d: usize, f: &Poly) -> Result<BitVec> {
        self.check_vars(f)?;
        let Some(g) = self.degree(d)? else {
            return Ok(BitVec::zeros(0));
        };
        let v = g.relations.reduce(g.vector(&f.homogeneous_part(d)));
        let mut c = BitVec::zeros(g.basis.len());
        for i in v.ones() {
            c.set(g.basis_pos[&i], true);
        }
        Ok(c)
    }

    /// The polynomial with the given coordinates in the basis of `A^d`.
    pub fn from_coords(&self, d: usize, c: &BitVec) -> Result<Poly> {
        let Some(g) = self.degree(d)? else {
            return Ok(Poly::zero(self.nvars()));
        };
        Ok(Poly::from_monomials(self.nvars(), c.ones().map(|k| g.monomials[g.basis[k]].clone())))
    }

    /// Polynomials `h_k` with `f + normal_form(f) = Σ_k h_k q_k` exactly.
    pub fn membership_certificate(&self, f: &Poly) -> Result<Vec<Poly>> {
        let m = self.nvars();
        let n = self.class.len();
        let residue = f + &self.normal_form(f)?;
        let mut h = vec![Poly::zero(m); n];
        for d in component_degrees(&residue) {
            let target = residue.homogeneous_part(d);
            let mus = Monomial::all_of_degree(m, d - 2);
            let monos = Monomial::all_of_degree(m, d);
            let index: HashMap<&Monomial, usize> = monos.iter().enumerate().map(|(i, mo)| (mo, i)).collect();
            let mut columns = Vec::with_capacity(mus.len() * n);
            for mu in &mus {
                for q in self.class.components() {
                    let mut col = BitVec::zeros(monos.len());
                    for t in q.mul_monomial(mu).terms() {
                        col.flip(index[t]);
                    }
                    columns.push(col);
                }
            }
            let a = BitMatrix::from_columns(&columns, monos.len());
            let mut rhs = BitVec::zeros(monos.len());
            for t in target.terms() {
                rhs.flip(index[t]);
            }
            let sol = solve_linear(&a, &BitMatrix::from_columns(&[rhs], monos.len()))
                .map_err(|_| Error::Internal("residue of a normal form is not in the ideal".into()))?;
            for u in sol.particular_column(0).ones() {
                h[u % n].toggle(mus[u / n].clone());
            }
        }
        Ok(h)
    }

    /// Does `f` lie in the ideal, within the truncation?
    pub fn contains(&self, f: &Poly) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    pub fn report(&self) -> QuotientReport {
        let dims = self.hilbert_series();
        let basis = (0..=self.max_degree)
            .filter_map(|d| {
                let b = self.basis(d).ok()?;
                (!b.is_empty()).then(|| (d.to_string(), b.iter().map(Monomial::to_string).collect()))
            })
            .collect();
        QuotientReport {
            dims,
            regular: self.class.len() == self.nvars() && self.is_finite(),
            basis,
        }
    }

    fn check_vars(&self, f: &Poly) -> Result<()> {
        if f.nvars() != self.nvars() {
            return Err(Error::DimensionMismatch {
                what: "polynomial variables".into(),
                expected: self.nvars(),
                found: f.nvars(),
            });
        }
        Ok(())
    }
}

fn component_degrees(f: &Poly) -> Vec<usize> {
    let mut ds: Vec<usize> = f.terms().map(Monomial::degree).collect();
    ds.dedup();
    ds
}

/// `C(m - 1 + d, d)`, saturating.
pub fn monomial_count(m: usize, d: usize) -> usize {
    if m == 0 {
        return usize::from(d == 0);
    }
    let mut c: u128 = 1;
    for i in 1..=d as u128 {
        c = c * (m as u128 - 1 + i) / i;
        if c > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    c as usize
}

/// `A*(Q)` is finite-dimensional. Any `m`-primary ideal generated by
/// quadrics contains a regular sequence of `m` quadrics after extending
/// scalars, so finiteness is equivalent to `A^{m+1} = 0`.
pub fn is_finite(class: &ExtensionClass) -> Result<bool> {
    let a = QuotientAlgebra::new(class, class.nvars() + 1)?;
    Ok(a.dim(class.nvars() + 1)? == 0)
}

/// `q_1..q_n` is a regular sequence: `m = n` and the quotient is finite.
pub fn is_regular_sequence(class: &ExtensionClass) -> Result<bool> {
    Ok(class.len() == class.nvars() && is_finite(class)?)
}

/// Coefficients of `(1 + t)^n` up to `t^len-1`.
pub fn binomial_series(n: usize, len: usize) -> Vec<usize> {
    (0..len).map(|d| binom(n, d)).collect()
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut c: u128 = 1;
    for i in 0..k as u128 {
        c = c * (n as u128 - i) / (i + 1);
    }
    c as usize
}
