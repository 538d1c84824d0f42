use std::cmp::Ordering;
use std::fmt;

/// A monomial `x_1^{a_1} ... x_m^{a_m}` stored as its exponent vector.
///
/// Ordered graded-lexicographically with `x_1 > x_2 > ... > x_m`: total
/// degree first, then the first differing exponent decides.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u8>,
    degree: u32,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Self {
            exps: vec![0; nvars],
            degree: 0,
        }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.exps[i] = 1;
        m.degree = 1;
        m
    }

    pub fn from_exponents(exps: Vec<u8>) -> Self {
        let degree = exps.iter().map(|&e| e as u32).sum();
        Self { exps, degree }
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    pub fn exponents(&self) -> &[u8] {
        &self.exps
    }

    pub fn exponent(&self, i: usize) -> u8 {
        self.exps[i]
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars(), other.nvars(), "monomials over different variable sets");
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
            .collect();
        Self {
            exps,
            degree: self.degree + other.degree,
        }
    }

    /// Multiply by `x_i`.
    pub fn times_var(&self, i: usize) -> Self {
        let mut m = self.clone();
        m.exps[i] += 1;
        m.degree += 1;
        m
    }

    /// Divide by `x_i`, if it divides.
    pub fn div_var(&self, i: usize) -> Option<Self> {
        if self.exps[i] == 0 {
            return None;
        }
        let mut m = self.clone();
        m.exps[i] -= 1;
        m.degree -= 1;
        Some(m)
    }

    /// Value at a point of `F_2^m`: 1 iff every variable that occurs is 1.
    pub fn eval(&self, point: impl Fn(usize) -> bool) -> bool {
        self.exps.iter().enumerate().all(|(i, &e)| e == 0 || point(i))
    }

    /// Reindex into `nvars` variables, variable `i` becoming `offset + i`.
    pub fn embed(&self, nvars: usize, offset: usize) -> Self {
        assert!(offset + self.nvars() <= nvars);
        let mut exps = vec![0; nvars];
        exps[offset..offset + self.nvars()].copy_from_slice(&self.exps);
        Self {
            exps,
            degree: self.degree,
        }
    }

    /// All monomials of degree `d` in `nvars` variables, largest first.
    pub fn all_of_degree(nvars: usize, d: usize) -> Vec<Monomial> {
        fn rec(prefix: &mut Vec<u8>, left: usize, remaining_vars: usize, out: &mut Vec<Monomial>) {
            if remaining_vars == 1 {
                prefix.push(left as u8);
                out.push(Monomial::from_exponents(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in (0..=left).rev() {
                prefix.push(e as u8);
                rec(prefix, left - e, remaining_vars - 1, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if d == 0 {
                out.push(Monomial::one(0));
            }
            return out;
        }
        rec(&mut Vec::with_capacity(nvars), d, nvars, &mut out);
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with_prefix(f, "x")
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Monomial {
    pub(crate) fn write_with_prefix(&self, f: &mut impl fmt::Write, prefix: &str) -> fmt::Result {
        if self.degree == 0 {
            return f.write_str("1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "{prefix}{}", i + 1)?;
            if e >= 2 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }

    /// Printed with a custom variable letter, e.g. `s1^2*s3`.
    pub fn to_string_with(&self, prefix: &str) -> String {
        let mut s = String::new();
        self.write_with_prefix(&mut s, prefix).unwrap();
        s
    }
}
