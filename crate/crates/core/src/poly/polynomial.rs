use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, AddAssign, Mul};

use rand::Rng;

use super::Monomial;
use crate::gf2::BitVec;

/// A polynomial over GF(2): a set of monomials, each with coefficient 1.
///
/// Addition is symmetric difference; the zero polynomial is the empty set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeSet<Monomial>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeSet::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_monomial(Monomial::one(nvars))
    }

    /// The variable `x_{i+1}` (0-based index `i`).
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        Self::from_monomial(Monomial::var(nvars, i))
    }

    pub fn from_monomial(m: Monomial) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeSet::new();
        terms.insert(m);
        Self { nvars, terms }
    }

    /// Sum of the given monomials; repeated monomials cancel in pairs.
    pub fn from_monomials(nvars: usize, monomials: impl IntoIterator<Item = Monomial>) -> Self {
        let mut p = Self::zero(nvars);
        for m in monomials {
            p.toggle(m);
        }
        p
    }

    /// Linear form `Σ c_i x_i`.
    pub fn linear(coeffs: &BitVec) -> Self {
        let nvars = coeffs.len();
        Self::from_monomials(nvars, coeffs.ones().map(|i| Monomial::var(nvars, i)))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.contains(m)
    }

    pub fn toggle(&mut self, m: Monomial) {
        assert_eq!(m.nvars(), self.nvars, "monomial over a different variable set");
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    /// Terms in increasing graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = &Monomial> + '_ {
        self.terms.iter()
    }

    /// Highest total degree, `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.iter().next_back().map(Monomial::degree)
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.iter().next_back()
    }

    /// True for zero and for polynomials whose terms all share one degree.
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.iter().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// True if zero or homogeneous of degree `d`.
    pub fn is_homogeneous_of(&self, d: usize) -> bool {
        self.terms.iter().all(|m| m.degree() == d)
    }

    pub fn homogeneous_part(&self, d: usize) -> Poly {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|m| m.degree() == d).cloned().collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        // Multiplication by a monomial is injective on monomials, so no
        // cancellation can happen.
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|t| t.mul(m)).collect(),
        }
    }

    /// The Bockstein `Sq^1`: the derivation with `x_i ↦ x_i^2`.
    ///
    /// On a monomial, `β(x^a) = Σ_i a_i x^{a + e_i}` with coefficients mod 2.
    pub fn bockstein(&self) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for m in &self.terms {
            for (i, &e) in m.exponents().iter().enumerate() {
                if e % 2 == 1 {
                    out.toggle(m.times_var(i));
                }
            }
        }
        out
    }

    /// Value at a point of `F_2^m`.
    pub fn eval(&self, point: &BitVec) -> bool {
        assert_eq!(point.len(), self.nvars);
        self.terms.iter().filter(|m| m.eval(|i| point.get(i))).count() % 2 == 1
    }

    /// Replace `x_i` by `images[i]`; all images share one variable set.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars, "one image per variable required");
        let target = images.first().map_or(0, Poly::nvars);
        let mut out = Poly::zero(target);
        for m in &self.terms {
            let mut term = Poly::one(target);
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    term = &term * &images[i];
                }
            }
            out += &term;
        }
        out
    }

    /// Reindex into a ring with `nvars` variables, `x_i ↦ x_{offset+i}`.
    pub fn embed(&self, nvars: usize, offset: usize) -> Poly {
        Self {
            nvars,
            terms: self.terms.iter().map(|m| m.embed(nvars, offset)).collect(),
        }
    }

    /// Random homogeneous polynomial of degree `d`, each monomial present
    /// with probability one half.
    pub fn random_homogeneous<R: Rng + ?Sized>(nvars: usize, d: usize, rng: &mut R) -> Poly {
        Self::from_monomials(
            nvars,
            Monomial::all_of_degree(nvars, d).into_iter().filter(|_| rng.gen::<bool>()),
        )
    }

    /// Printed with a custom variable letter.
    pub fn to_string_with(&self, prefix: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .rev()
            .map(|m| m.to_string_with(prefix))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        assert_eq!(self.nvars, rhs.nvars, "adding polynomials over different variable sets");
        for m in &rhs.terms {
            if !self.terms.remove(m) {
                self.terms.insert(m.clone());
            }
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "multiplying polynomials over different variable sets");
        let mut out = Poly::zero(self.nvars);
        for a in &self.terms {
            for b in &rhs.terms {
                out.toggle(a.mul(b));
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    /// Terms separated by `" + "`, largest monomial first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with("x"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({self})", self.nvars)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn p(s: &str, m: usize) -> Poly {
        parse_poly(s, m).unwrap()
    }

    #[test]
    fn bockstein_generator_rule() {
        assert_eq!(p("x1", 1).bockstein(), p("x1^2", 1));
    }

    #[test]
    fn bockstein_leibniz_example() {
        assert_eq!(p("x1*x2", 2).bockstein(), p("x1^2*x2 + x1*x2^2", 2));
    }

    #[test]
    fn bockstein_of_u3_middle_component() {
        assert_eq!(p("x2^2 + x1*x3", 3).bockstein(), p("x1^2*x3 + x1*x3^2", 3));
    }

    #[test]
    fn char_two_cancellation() {
        let x = p("x1 + x2", 2);
        assert_eq!(&x * &x, p("x1^2 + x2^2", 2));
        assert!((&x + &x).is_zero());
    }

    #[test]
    fn substitution_of_linear_forms() {
        // x1*x2 with x1 -> y1 + y2, x2 -> y2
        let f = p("x1*x2", 2);
        let images = vec![p("x1 + x2", 2), p("x2", 2)];
        assert_eq!(f.substitute(&images), p("x1*x2 + x2^2", 2));
    }

    #[test]
    fn evaluation() {
        let f = p("x1^2 + x1*x2", 2);
        assert!(f.eval(&BitVec::from_bools(&[true, false])));
        assert!(!f.eval(&BitVec::from_bools(&[true, true])));
    }
}
