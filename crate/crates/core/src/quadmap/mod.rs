//! Quadratic maps `Q: W → V` over `F_2`.
//!
//! A map is stored through its values on a basis `w_1..w_m` of `W` together
//! with its polar form `B(w, w') = Q(w + w') + Q(w) + Q(w')` on basis pairs.
//! The extension class of the central extension `0 → V → G(Q) → W → 0` has
//! components
//!
//! ```text
//! q_k = Σ_i Q_k(w_i) x_i² + Σ_{i<j} B_k(w_i, w_j) x_i x_j
//! ```
//!
//! in `F_2[x_1..x_m]`, and the two descriptions determine each other.

mod family;
mod json;
mod morphism;

pub use family::{family, FamilyKind};
pub use json::QuadraticMapJson;
pub use morphism::{QuadMorphism, Quotient, Restriction};

use std::fmt;

use rand::Rng;

use crate::gf2::{BitMatrix, BitVec, EchelonBasis};
use crate::poly::{Monomial, Poly};
use crate::{Error, Result};

/// Largest `dim W` for which point enumeration of `W` is attempted.
pub const ENUMERATION_CAP: usize = 24;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticMap {
    m: usize,
    n: usize,
    q_on_basis: Vec<BitVec>,
    // Full symmetric table, zero diagonal, index i * m + j.
    b_table: Vec<BitVec>,
}

/// The column `q = (q_1, ..., q_n)` of degree-2 polynomials in `m` variables.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExtensionClass {
    nvars: usize,
    components: Vec<Poly>,
}

impl ExtensionClass {
    /// Validates that every entry is zero or homogeneous of degree 2.
    pub fn new(components: Vec<Poly>, nvars: usize) -> Result<Self> {
        for (k, q) in components.iter().enumerate() {
            if q.nvars() != nvars {
                return Err(Error::DimensionMismatch {
                    what: format!("variables of q_{}", k + 1),
                    expected: nvars,
                    found: q.nvars(),
                });
            }
            if !q.is_homogeneous_of(2) {
                return Err(Error::NotQuadratic(format!(
                    "q_{} = {q} is not homogeneous of degree 2",
                    k + 1
                )));
            }
        }
        Ok(Self { nvars, components })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.components.iter().map(Poly::to_string).collect()
    }
}

impl QuadraticMap {
    /// Build from `Q(w_i)` and the pairs `((i, j), B(w_i, w_j))` with `i < j`
    /// (0-based). Pairs not listed have `B = 0`.
    pub fn new(
        m: usize,
        n: usize,
        q_on_basis: Vec<BitVec>,
        b_pairs: impl IntoIterator<Item = ((usize, usize), BitVec)>,
    ) -> Result<Self> {
        if q_on_basis.len() != m {
            return Err(Error::DimensionMismatch {
                what: "number of basis values Q(w_i)".into(),
                expected: m,
                found: q_on_basis.len(),
            });
        }
        for v in &q_on_basis {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    what: "length of Q(w_i)".into(),
                    expected: n,
                    found: v.len(),
                });
            }
        }
        let mut b_table = vec![BitVec::zeros(n); m * m];
        for ((i, j), v) in b_pairs {
            if i >= j || j >= m {
                return Err(Error::InvalidMap(format!(
                    "bilinear entry ({}, {}) must satisfy i < j <= m",
                    i + 1,
                    j + 1
                )));
            }
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    what: "length of B(w_i, w_j)".into(),
                    expected: n,
                    found: v.len(),
                });
            }
            b_table[i * m + j] = v.clone();
            b_table[j * m + i] = v;
        }
        Ok(Self {
            m,
            n,
            q_on_basis,
            b_table,
        })
    }

    pub fn zero(m: usize, n: usize) -> Self {
        Self {
            m,
            n,
            q_on_basis: vec![BitVec::zeros(n); m],
            b_table: vec![BitVec::zeros(n); m * m],
        }
    }

    /// Inverse of [`QuadraticMap::extension_class`]: read `Q(w_i)` off the
    /// `x_i²` coefficients and `B(w_i, w_j)` off the `x_i x_j` coefficients.
    pub fn from_polys(q: &[Poly], m: usize) -> Result<Self> {
        let class = ExtensionClass::new(q.to_vec(), m)?;
        Ok(Self::from_class(&class))
    }

    pub fn from_class(class: &ExtensionClass) -> Self {
        let (m, n) = (class.nvars(), class.len());
        let mut map = Self::zero(m, n);
        for (k, qk) in class.components().iter().enumerate() {
            for mono in qk.terms() {
                let vars: Vec<usize> = mono
                    .exponents()
                    .iter()
                    .enumerate()
                    .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
                    .collect();
                match vars[..] {
                    [i, j] if i == j => map.q_on_basis[i].flip(k),
                    [i, j] => {
                        map.b_table[i * m + j].flip(k);
                        map.b_table[j * m + i].flip(k);
                    }
                    _ => unreachable!("validated degree 2"),
                }
            }
        }
        map
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `Q(w_i)` for the basis vector `w_{i+1}`.
    pub fn q_basis(&self, i: usize) -> &BitVec {
        &self.q_on_basis[i]
    }

    /// `B(w_i, w_j)` on basis vectors (0-based); zero on the diagonal.
    pub fn b(&self, i: usize, j: usize) -> &BitVec {
        &self.b_table[i * self.m + j]
    }

    /// The polar form as a table: entry `[i][j] = B(w_i, w_j)`.
    pub fn polarize(&self) -> Vec<Vec<BitVec>> {
        (0..self.m)
            .map(|i| (0..self.m).map(|j| self.b(i, j).clone()).collect())
            .collect()
    }

    fn check_w(&self, w: &BitVec) -> Result<()> {
        if w.len() != self.m {
            return Err(Error::DimensionMismatch {
                what: "vector in W".into(),
                expected: self.m,
                found: w.len(),
            });
        }
        Ok(())
    }

    /// `Q(Σ a_i w_i) = Σ a_i Q(w_i) + Σ_{i<j} a_i a_j B(w_i, w_j)`.
    pub fn eval(&self, w: &BitVec) -> Result<BitVec> {
        self.check_w(w)?;
        let support: Vec<usize> = w.ones().collect();
        let mut out = BitVec::zeros(self.n);
        for (a, &i) in support.iter().enumerate() {
            out.xor_with(&self.q_on_basis[i]);
            for &j in &support[a + 1..] {
                out.xor_with(self.b(i, j));
            }
        }
        Ok(out)
    }

    /// `B(w, w')`, bilinear in both arguments.
    pub fn bilinear(&self, w: &BitVec, w2: &BitVec) -> Result<BitVec> {
        self.check_w(w)?;
        self.check_w(w2)?;
        let mut out = BitVec::zeros(self.n);
        for i in w.ones() {
            for j in w2.ones() {
                out.xor_with(self.b(i, j));
            }
        }
        Ok(out)
    }

    /// Components `q_1..q_n` of the extension class.
    pub fn extension_class(&self) -> ExtensionClass {
        let m = self.m;
        let mut comps = vec![Poly::zero(m); self.n];
        for i in 0..m {
            for k in self.q_on_basis[i].ones() {
                let mut e = vec![0u8; m];
                e[i] = 2;
                comps[k].toggle(Monomial::from_exponents(e));
            }
            for j in i + 1..m {
                for k in self.b(i, j).ones() {
                    let mut e = vec![0u8; m];
                    e[i] = 1;
                    e[j] = 1;
                    comps[k].toggle(Monomial::from_exponents(e));
                }
            }
        }
        ExtensionClass {
            nvars: m,
            components: comps,
        }
    }

    /// Image of `Q` spans `V`. The span is that of the `Q(w_i)` and
    /// `B(w_i, w_j)`, since `Q(w_i + w_j) = Q(w_i) + Q(w_j) + B(w_i, w_j)`.
    pub fn is_frattini(&self) -> bool {
        let mut e = EchelonBasis::new(self.n);
        for v in &self.q_on_basis {
            e.insert(v.clone());
        }
        for i in 0..self.m {
            for j in i + 1..self.m {
                e.insert(self.b(i, j).clone());
            }
        }
        e.rank() == self.n
    }

    /// `Q(w) = 0` only for `w = 0`, by enumeration of all of `W`.
    pub fn is_effective(&self) -> Result<bool> {
        let mut effective = true;
        self.try_for_each_value(|w, value| {
            if w != 0 && value.is_zero() {
                effective = false;
                return false;
            }
            true
        })?;
        Ok(effective)
    }

    /// Some nonzero `w` with `Q(w) = 0`, if any.
    pub fn singular_witness(&self) -> Result<Option<BitVec>> {
        let mut found = None;
        self.try_for_each_value(|w, value| {
            if w != 0 && value.is_zero() {
                found = Some(w);
                return false;
            }
            true
        })?;
        Ok(found.map(|w| BitVec::from_u64(w, self.m)))
    }

    pub fn is_two_power_exact(&self) -> Result<bool> {
        Ok(self.m == self.n && self.is_frattini() && self.is_effective()?)
    }

    /// Visit `(w, Q(w))` for every `w ∈ W` in Gray-code order, with `w`
    /// encoded as an integer (bit `i` = coordinate `i`). Stops early when
    /// the visitor returns false.
    pub fn try_for_each_value(&self, mut visit: impl FnMut(u64, &BitVec) -> bool) -> Result<()> {
        if self.m > ENUMERATION_CAP {
            return Err(Error::CapExceeded {
                what: "enumeration of W".into(),
                limit: ENUMERATION_CAP,
                requested: self.m,
            });
        }
        let mut w: u64 = 0;
        let mut value = BitVec::zeros(self.n);
        // bw[i] = B(w, w_i) for the current w
        let mut bw = vec![BitVec::zeros(self.n); self.m];
        if !visit(0, &value) {
            return Ok(());
        }
        for step in 1u64..(1u64 << self.m) {
            let i = step.trailing_zeros() as usize;
            // Q(w + w_i) = Q(w) + Q(w_i) + B(w, w_i)
            value.xor_with(&self.q_on_basis[i]);
            value.xor_with(&bw[i]);
            w ^= 1 << i;
            for (j, b) in bw.iter_mut().enumerate() {
                b.xor_with(self.b(i, j));
            }
            if !visit(w, &value) {
                break;
            }
        }
        Ok(())
    }

    /// Every quadratic map with the given dimensions, indexed by an integer
    /// code whose bits fill `Q(w_1)..Q(w_m)` and then `B(w_i, w_j)` for
    /// `i < j` in row-major order.
    pub fn from_code(m: usize, n: usize, code: u64) -> Self {
        let mut bits = (0..).map(|k| (code >> k) & 1 == 1);
        let mut map = Self::zero(m, n);
        for i in 0..m {
            for k in 0..n {
                if bits.next().unwrap() {
                    map.q_on_basis[i].set(k, true);
                }
            }
        }
        for i in 0..m {
            for j in i + 1..m {
                for k in 0..n {
                    if bits.next().unwrap() {
                        map.b_table[i * m + j].set(k, true);
                        map.b_table[j * m + i].set(k, true);
                    }
                }
            }
        }
        map
    }

    /// Number of maps enumerated by [`QuadraticMap::from_code`].
    pub fn code_count(m: usize, n: usize) -> u64 {
        1u64 << (n * (m + m * m.saturating_sub(1) / 2))
    }

    pub fn random<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> Self {
        let bits = n * (m + m * m.saturating_sub(1) / 2);
        assert!(bits <= 64, "random maps limited to 64 coefficient bits");
        let code = if bits == 64 { rng.gen() } else { rng.gen::<u64>() & ((1u64 << bits) - 1) };
        Self::from_code(m, n, code)
    }

    /// Value matrix whose columns are `Q(w_i)`.
    pub fn q_matrix(&self) -> BitMatrix {
        BitMatrix::from_columns(&self.q_on_basis, self.n)
    }
}

impl fmt::Debug for QuadraticMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "QuadraticMap(m={}, n={}, q=[{}])",
            self.m,
            self.n,
            self.extension_class().to_strings().join(", ")
        )
    }
}

/// Small named maps used throughout tests and examples.
pub mod examples {
    use super::*;
    use crate::poly::parse_column;

    fn from_strs(q: &[&str], m: usize) -> QuadraticMap {
        QuadraticMap::from_polys(&parse_column(q, m).unwrap(), m).unwrap()
    }

    /// `m = n = 1`, `Q(w_1) = v_1`: the extension `Z/4`.
    pub fn z4() -> QuadraticMap {
        from_strs(&["x1^2"], 1)
    }

    /// `q = (x_1², ..., x_n²)`: the group `(Z/4)^n`.
    pub fn z4_power(n: usize) -> QuadraticMap {
        let q: Vec<String> = (1..=n).map(|i| format!("x{i}^2")).collect();
        let q: Vec<&str> = q.iter().map(String::as_str).collect();
        from_strs(&q, n)
    }

    /// Strictly upper triangular 3×3 matrices with `Q(A) = A² + A`.
    pub fn u3() -> QuadraticMap {
        from_strs(&["x1^2", "x2^2 + x1*x3", "x3^2"], 3)
    }

    /// `q = (x_1 x_2 + x_3²)`, which is not Bockstein closed.
    pub fn non_closed() -> QuadraticMap {
        from_strs(&["x1*x2 + x3^2"], 3)
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;
    use crate::poly::parse_column;

    fn bv(bits: &[u8]) -> BitVec {
        BitVec::from_bools(&bits.iter().map(|&b| b == 1).collect::<Vec<_>>())
    }

    #[test]
    fn eval_examples() {
        assert_eq!(z4().eval(&bv(&[1])).unwrap(), bv(&[1]));
        assert_eq!(z4().eval(&bv(&[0])).unwrap(), bv(&[0]));
        // e12 + e23 squared is e13
        assert_eq!(u3().eval(&bv(&[1, 0, 1])).unwrap(), bv(&[1, 1, 1]));
        assert!(matches!(u3().eval(&bv(&[1])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn polarize_examples() {
        assert!(z4().polarize()[0][0].is_zero());
        let b = u3().polarize();
        assert_eq!(b[0][2], bv(&[0, 1, 0]));
        assert!(b[0][1].is_zero());
        assert!(QuadraticMap::zero(3, 2).polarize().iter().flatten().all(BitVec::is_zero));
    }

    #[test]
    fn extension_class_examples() {
        assert_eq!(z4().extension_class().to_strings(), vec!["x1^2"]);
        assert_eq!(
            u3().extension_class().to_strings(),
            vec!["x1^2", "x1*x3 + x2^2", "x3^2"]
        );
        assert_eq!(QuadraticMap::zero(2, 1).extension_class().to_strings(), vec!["0"]);
    }

    #[test]
    fn from_polys_rejects_non_quadrics() {
        let bad = parse_column(&["x1^2 + x2"], 2).unwrap();
        assert!(matches!(QuadraticMap::from_polys(&bad, 2), Err(Error::NotQuadratic(_))));
        let cubic = parse_column(&["x1^3"], 2).unwrap();
        assert!(QuadraticMap::from_polys(&cubic, 2).is_err());
    }

    #[test]
    fn two_power_exact_examples() {
        assert!(u3().is_two_power_exact().unwrap());
        let zero = QuadraticMap::zero(1, 1);
        assert!(!zero.is_frattini());
        assert!(!zero.is_effective().unwrap());
        assert!(!zero.is_two_power_exact().unwrap());
        let nc = non_closed();
        assert!(!nc.is_effective().unwrap());
        assert!(nc.singular_witness().unwrap().is_some());
    }

    #[test]
    fn enumeration_cap() {
        let big = QuadraticMap::zero(ENUMERATION_CAP + 1, 1);
        assert!(matches!(big.is_effective(), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn code_enumeration_is_a_bijection_onto_maps() {
        let count = QuadraticMap::code_count(2, 2);
        assert_eq!(count, 1 << 6);
        let all: std::collections::HashSet<_> =
            (0..count).map(|c| QuadraticMap::from_code(2, 2, c)).collect();
        assert_eq!(all.len() as u64, count);
    }
}
