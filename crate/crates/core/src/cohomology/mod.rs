//! The cochain complex `C^p(Q, U) = A^p(Q) ⊗ U` with `δ(f) = β(f) + Rf`,
//! its cohomology, and the dictionary between degree-2 classes and
//! extensions of quadratic maps.

mod extension;
mod sym;

pub use extension::{
    cocycle_to_extension, cocycle_to_extension_raw, extension_to_cocycle, extensions_equivalent, splittings,
    Equivalence, Extension, SPLITTING_CAP,
};
pub use sym::sym_power_module;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Serialize;

use crate::bockstein::{is_bockstein_closed, QModule};
use crate::gf2::{solve_linear, BitMatrix, BitVec, EchelonBasis};
use crate::ideal::QuotientAlgebra;
use crate::poly::Poly;
use crate::quadmap::ExtensionClass;
use crate::{Error, Result};

/// An element of `A^p(Q) ⊗ U`: a column of `dim U` polynomials of degree
/// `p`, each in normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cochain {
    degree: usize,
    entries: Vec<Poly>,
}

impl Cochain {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.entries.iter().map(Poly::to_string).collect()
    }
}

/// `H^p(Q, U)` with canonical representatives: the reduced echelon basis of
/// the cocycles after clearing the pivot coordinates of the coboundaries.
#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    pub p: usize,
    pub dim: usize,
    pub representatives: Vec<Cochain>,
}

/// Outcome of testing a degree-3 cochain `η` over the `L`-module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Obstruction {
    NotCocycle,
    /// `η = δ(ξ)` for the returned degree-2 cochain `ξ`.
    Coboundary(Cochain),
    NontrivialClass,
}

/// Serializable cohomology summary.
#[derive(Clone, Debug, Serialize)]
pub struct CohomologyReport {
    pub module: String,
    pub dims: BTreeMap<String, usize>,
    pub representatives: BTreeMap<String, Vec<Vec<String>>>,
}

/// The complex `A*(Q) ⊗ U` for a fixed quotient algebra and module.
#[derive(Debug)]
pub struct Complex<'a> {
    algebra: &'a QuotientAlgebra,
    module: QModule,
    linear_parts: Vec<BitMatrix>,
    differentials: Vec<OnceLock<BitMatrix>>,
}

impl<'a> Complex<'a> {
    /// Requires `Q` Bockstein closed (so `β` preserves the ideal) and the
    /// module to satisfy `β(R) + R² = T(q)`.
    pub fn new(algebra: &'a QuotientAlgebra, module: &QModule) -> Result<Self> {
        let class = algebra.class();
        if module.nvars() != class.nvars() || module.t().len() != class.len() {
            return Err(Error::DimensionMismatch {
                what: "module and quadratic map".into(),
                expected: class.nvars(),
                found: module.nvars(),
            });
        }
        if !is_bockstein_closed(class) {
            return Err(Error::NotClosed);
        }
        if !module.check_representation(class) {
            return Err(Error::NotRepresentation);
        }
        let linear_parts = module.r().linear_parts()?;
        Ok(Self {
            algebra,
            module: module.clone(),
            linear_parts,
            differentials: (0..=algebra.max_degree() + 1).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn algebra(&self) -> &QuotientAlgebra {
        self.algebra
    }

    pub fn module(&self) -> &QModule {
        &self.module
    }

    fn k(&self) -> usize {
        self.module.dim()
    }

    pub fn cochain_dim(&self, p: usize) -> Result<usize> {
        Ok(self.algebra.dim(p)? * self.k())
    }

    /// Normalize a column of degree-`p` polynomials into a cochain.
    pub fn cochain(&self, p: usize, entries: Vec<Poly>) -> Result<Cochain> {
        if entries.len() != self.k() {
            return Err(Error::DimensionMismatch {
                what: "cochain entries".into(),
                expected: self.k(),
                found: entries.len(),
            });
        }
        let entries = entries
            .iter()
            .map(|f| {
                if !f.is_homogeneous_of(p) {
                    return Err(Error::NotQuadratic(format!("{f} is not homogeneous of degree {p}")));
                }
                self.algebra.normal_form(f)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Cochain { degree: p, entries })
    }

    pub fn zero_cochain(&self, p: usize) -> Cochain {
        Cochain {
            degree: p,
            entries: vec![Poly::zero(self.algebra.nvars()); self.k()],
        }
    }

    /// Coordinates in the basis `(entry r, monomial b)` at index
    /// `r * dim A^p + b`.
    pub fn coords(&self, c: &Cochain) -> Result<BitVec> {
        let d = self.algebra.dim(c.degree)?;
        let mut out = BitVec::zeros(d * self.k());
        for (r, f) in c.entries.iter().enumerate() {
            for b in self.algebra.coords(c.degree, f)?.ones() {
                out.set(r * d + b, true);
            }
        }
        Ok(out)
    }

    pub fn from_coords(&self, p: usize, v: &BitVec) -> Result<Cochain> {
        let d = self.algebra.dim(p)?;
        let entries = (0..self.k())
            .map(|r| self.algebra.from_coords(p, &v.slice(r * d, d)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Cochain { degree: p, entries })
    }

    /// Matrix of `δ: C^p → C^{p+1}`.
    pub fn differential_matrix(&self, p: usize) -> Result<&BitMatrix> {
        if let Some(m) = self.differentials.get(p).and_then(OnceLock::get) {
            return Ok(m);
        }
        let built = self.build_differential(p)?;
        match self.differentials.get(p) {
            Some(cell) => Ok(cell.get_or_init(|| built)),
            None => Err(Error::TruncationExceeded {
                degree: p + 1,
                max_degree: self.algebra.max_degree(),
            }),
        }
    }

    fn build_differential(&self, p: usize) -> Result<BitMatrix> {
        let a = self.algebra;
        let m = a.nvars();
        let k = self.k();
        let (d0, d1) = (a.dim(p)?, a.dim(p + 1)?);
        let basis = a.basis(p)?;
        let mut columns = Vec::with_capacity(d0 * k);
        // per basis monomial: β(μ) and x_i μ in A^{p+1}
        let images: Vec<(BitVec, Vec<BitVec>)> = basis
            .iter()
            .map(|mu| {
                let f = Poly::from_monomial(mu.clone());
                let beta = a.coords(p + 1, &f.bockstein())?;
                let times = (0..m)
                    .map(|i| a.coords(p + 1, &Poly::from_monomial(mu.times_var(i))))
                    .collect::<Result<Vec<_>>>()?;
                Ok((beta, times))
            })
            .collect::<Result<Vec<_>>>()?;
        for r in 0..k {
            for (beta, times) in &images {
                let mut col = BitVec::zeros(d1 * k);
                for b in beta.ones() {
                    col.flip(r * d1 + b);
                }
                for (i, part) in self.linear_parts.iter().enumerate() {
                    for s in 0..k {
                        if part.get(s, r) {
                            for b in times[i].ones() {
                                col.flip(s * d1 + b);
                            }
                        }
                    }
                }
                columns.push(col);
            }
        }
        Ok(BitMatrix::from_columns(&columns, d1 * k))
    }

    /// `δ(c) = normal_form(β(c) + R c)`.
    pub fn differential(&self, c: &Cochain) -> Result<Cochain> {
        let beta: Vec<Poly> = c.entries.iter().map(Poly::bockstein).collect();
        let rc = self.module.r().apply(&c.entries)?;
        let sum = beta.iter().zip(&rc).map(|(a, b)| a + b).collect();
        self.cochain(c.degree + 1, sum)
    }

    pub fn is_cocycle(&self, c: &Cochain) -> Result<bool> {
        Ok(self.differential(c)?.is_zero())
    }

    /// Some `ξ` with `δ(ξ) = c`, if `c` is a coboundary.
    pub fn coboundary_preimage(&self, c: &Cochain) -> Result<Option<Cochain>> {
        let p = c.degree;
        if p == 0 {
            return Ok(c.is_zero().then(|| self.zero_cochain(0)));
        }
        let d = self.differential_matrix(p - 1)?;
        let target = BitMatrix::from_columns(&[self.coords(c)?], d.nrows());
        match solve_linear(d, &target) {
            Ok(sol) => Ok(Some(self.from_coords(p - 1, &sol.particular_column(0))?)),
            Err(Error::NoSolution) => Ok(None),
            Err(e) => Err(e),
        }
    }

    fn coboundary_basis(&self, p: usize) -> Result<EchelonBasis> {
        let mut e = EchelonBasis::new(self.cochain_dim(p)?);
        if p > 0 {
            let d = self.differential_matrix(p - 1)?;
            for v in d.transpose().rows() {
                e.insert(v.clone());
            }
        }
        Ok(e)
    }

    pub fn cohomology(&self, p: usize) -> Result<CohomologyGroup> {
        let boundaries = self.coboundary_basis(p)?;
        let width = self.cochain_dim(p)?;
        let mut reduced = EchelonBasis::new(width);
        for z in self.differential_matrix(p)?.kernel() {
            reduced.insert(boundaries.reduce(z));
        }
        let representatives = reduced
            .reduced_rows()
            .iter()
            .map(|v| self.from_coords(p, v))
            .collect::<Result<Vec<_>>>()?;
        Ok(CohomologyGroup {
            p,
            dim: representatives.len(),
            representatives,
        })
    }

    /// `dim H^p` via ranks only.
    pub fn cohomology_dim(&self, p: usize) -> Result<usize> {
        let dp = self.differential_matrix(p)?;
        let kernel = dp.ncols() - dp.rank();
        let image = if p == 0 { 0 } else { self.differential_matrix(p - 1)?.rank() };
        Ok(kernel - image)
    }

    /// Is `[c] = 0`?
    pub fn is_coboundary(&self, c: &Cochain) -> Result<bool> {
        Ok(self.coboundary_basis(c.degree)?.contains(&self.coords(c)?))
    }

    /// Classify `η ∈ C^3` over the `L`-module: not a cocycle, a coboundary
    /// `δ(ξ)`, or a nonzero class in `H^3`.
    pub fn obstruction_test(&self, eta: &Cochain) -> Result<Obstruction> {
        if !self.is_cocycle(eta)? {
            return Ok(Obstruction::NotCocycle);
        }
        Ok(match self.coboundary_preimage(eta)? {
            Some(xi) => Obstruction::Coboundary(xi),
            None => Obstruction::NontrivialClass,
        })
    }

    /// `[f][g] = [fg]` for trivial one-dimensional coefficients.
    pub fn cup(&self, f: &Cochain, g: &Cochain) -> Result<Cochain> {
        if self.k() != 1 || !self.module.is_trivial() {
            return Err(Error::Refused("cup products need trivial coefficients F_2".into()));
        }
        self.cochain(f.degree + g.degree, vec![&f.entries[0] * &g.entries[0]])
    }

    pub fn report(&self, label: &str, degrees: std::ops::RangeInclusive<usize>) -> Result<CohomologyReport> {
        let mut dims = BTreeMap::new();
        let mut representatives = BTreeMap::new();
        for p in degrees {
            let h = self.cohomology(p)?;
            dims.insert(p.to_string(), h.dim);
            representatives.insert(p.to_string(), h.representatives.iter().map(Cochain::to_strings).collect());
        }
        Ok(CohomologyReport {
            module: label.to_string(),
            dims,
            representatives,
        })
    }
}

/// Basis of `U^Q = {u : ρ_W(w) u = 0 for all w}`: the joint kernel of the
/// coefficient matrices of `R`.
pub fn invariants(module: &QModule) -> Result<Vec<BitVec>> {
    let k = module.dim();
    let mut stacked = BitMatrix::zeros(0, k);
    for part in module.r().linear_parts()? {
        stacked = stacked.vstack(&part);
    }
    Ok(stacked.kernel())
}

/// A basis of `Z(Q)^β = {Σ c_k q_k : β(Σ c_k q_k) = 0 in F_2[x]}`, each
/// quadric with one coefficient vector `c` producing it.
pub fn bockstein_invariants(class: &ExtensionClass) -> Vec<(BitVec, Poly)> {
    let m = class.nvars();
    let coords = |p: &Poly, monos: &[crate::poly::Monomial]| {
        let index: std::collections::HashMap<_, _> = monos.iter().enumerate().map(|(i, mo)| (mo, i)).collect();
        let mut v = BitVec::zeros(monos.len());
        for t in p.terms() {
            v.flip(index[t]);
        }
        v
    };
    let cubics = crate::poly::Monomial::all_of_degree(m, 3);
    let cols: Vec<BitVec> = class.components().iter().map(|q| coords(&q.bockstein(), &cubics)).collect();
    let mat = BitMatrix::from_columns(&cols, cubics.len());
    let mut kernel = EchelonBasis::new(class.len());
    for v in mat.kernel() {
        kernel.insert(v);
    }
    let quadrics = crate::poly::Monomial::all_of_degree(m, 2);
    let mut span = EchelonBasis::new(quadrics.len());
    kernel
        .reduced_rows()
        .into_iter()
        .filter_map(|c| {
            let mut p = Poly::zero(m);
            for j in c.ones() {
                p += &class.components()[j];
            }
            span.insert(coords(&p, &quadrics)).then_some((c, p))
        })
        .collect()
}

/// Cochain from printed entries, without normalization checks beyond
/// parsing; convenience for tests and the command line.
pub fn parse_cochain(complex: &Complex<'_>, p: usize, entries: &[&str]) -> Result<Cochain> {
    let polys = crate::poly::parse_column(entries, complex.algebra().nvars())?;
    complex.cochain(p, polys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bockstein::{module_from_l, solve_l};
    use crate::poly::PolyMatrix;
    use crate::quadmap::examples;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn u3_setup() -> (QuotientAlgebra, QModule, QModule) {
        let class = examples::u3().extension_class();
        let a = QuotientAlgebra::new(&class, 8).unwrap();
        let l = solve_l(&class).unwrap().particular;
        let lm = module_from_l(&class, &l).unwrap();
        (a, QModule::trivial(1, 3, 3), lm)
    }

    #[test]
    fn trivial_differential_on_u3() {
        let (a, triv, _) = u3_setup();
        let c = Complex::new(&a, &triv).unwrap();
        let x2 = parse_cochain(&c, 1, &["x2"]).unwrap();
        assert_eq!(c.differential(&x2).unwrap().to_strings(), vec!["x2^2"]);
        let x1 = parse_cochain(&c, 1, &["x1"]).unwrap();
        assert!(c.differential(&x1).unwrap().is_zero());
        assert!(c.differential(&c.zero_cochain(0)).unwrap().is_zero());
    }

    #[test]
    fn u3_trivial_dims() {
        let (a, triv, _) = u3_setup();
        let c = Complex::new(&a, &triv).unwrap();
        let dims: Vec<usize> = (0..=4).map(|p| c.cohomology(p).unwrap().dim).collect();
        assert_eq!(dims[0], 1);
        assert_eq!(dims[1], 2);
        assert_eq!(bockstein_invariants(a.class()).len(), 2);
        for p in 0..=4 {
            assert_eq!(c.cohomology_dim(p).unwrap(), dims[p]);
        }
        // Euler characteristic over the finite algebra
        let chi_c: i64 = (0..=4).map(|p| (-1i64).pow(p as u32) * c.cochain_dim(p).unwrap() as i64).sum();
        let chi_h: i64 = (0..=4).map(|p| (-1i64).pow(p as u32) * dims[p] as i64).sum();
        assert_eq!(chi_c, chi_h);
    }

    #[test]
    fn z4_trivial_dims() {
        let class = examples::z4().extension_class();
        let a = QuotientAlgebra::new(&class, 4).unwrap();
        let c = Complex::new(&a, &QModule::trivial(1, 1, 1)).unwrap();
        let dims: Vec<usize> = (0..=3).map(|p| c.cohomology(p).unwrap().dim).collect();
        assert_eq!(dims, vec![1, 1, 0, 0]);
    }

    #[test]
    fn delta_squared_vanishes_for_l_module() {
        let (a, _, lm) = u3_setup();
        let c = Complex::new(&a, &lm).unwrap();
        for p in 0..4 {
            let prod = c.differential_matrix(p + 1).unwrap().mul(c.differential_matrix(p).unwrap());
            assert!(prod.is_zero(), "degree {p}");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let entries = (0..3).map(|_| Poly::random_homogeneous(3, 1, &mut rng)).collect();
            let f = c.cochain(1, entries).unwrap();
            assert!(c.differential(&c.differential(&f).unwrap()).unwrap().is_zero());
        }
    }

    #[test]
    fn invariants_of_l_module() {
        let (a, triv, lm) = u3_setup();
        let inv = invariants(&lm).unwrap();
        assert_eq!(inv, vec![BitVec::unit(3, 1)]);
        let c = Complex::new(&a, &lm).unwrap();
        assert_eq!(c.cohomology(0).unwrap().dim, 1);
        assert_eq!(invariants(&triv).unwrap().len(), 1);
    }

    #[test]
    fn bockstein_invariants_examples() {
        let inv = bockstein_invariants(&examples::u3().extension_class());
        let polys: Vec<String> = inv.iter().map(|(_, p)| p.to_string()).collect();
        assert_eq!(polys, vec!["x1^2", "x3^2"]);
        assert_eq!(bockstein_invariants(&examples::z4_power(3).extension_class()).len(), 3);
        assert!(bockstein_invariants(&ExtensionClass::new(vec![], 2).unwrap()).is_empty());
    }

    #[test]
    fn cup_products() {
        let (a, triv, lm) = u3_setup();
        let c = Complex::new(&a, &triv).unwrap();
        let one = parse_cochain(&c, 0, &["1"]).unwrap();
        let x1 = parse_cochain(&c, 1, &["x1"]).unwrap();
        let x3 = parse_cochain(&c, 1, &["x3"]).unwrap();
        assert_eq!(c.cup(&one, &x1).unwrap(), x1);
        assert!(c.cup(&x1, &x1).unwrap().is_zero());
        let x13 = c.cup(&x1, &x3).unwrap();
        assert!(c.is_cocycle(&x13).unwrap());
        assert_eq!(x13.to_strings(), vec!["x2^2"]);
        let lc = Complex::new(&a, &lm).unwrap();
        let y = lc.zero_cochain(1);
        assert!(matches!(lc.cup(&y, &y), Err(Error::Refused(_))));
    }

    #[test]
    fn obstruction_examples() {
        let (a, _, lm) = u3_setup();
        let c = Complex::new(&a, &lm).unwrap();
        let zero = c.zero_cochain(3);
        assert_eq!(c.obstruction_test(&zero).unwrap(), Obstruction::Coboundary(c.zero_cochain(2)));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let xi = c
            .cochain(2, (0..3).map(|_| Poly::random_homogeneous(3, 2, &mut rng)).collect())
            .unwrap();
        let eta = c.differential(&xi).unwrap();
        match c.obstruction_test(&eta).unwrap() {
            Obstruction::Coboundary(found) => assert_eq!(c.differential(&found).unwrap(), eta),
            other => panic!("expected coboundary, got {other:?}"),
        }
        for rep in c.cohomology(3).unwrap().representatives {
            assert_eq!(c.obstruction_test(&rep).unwrap(), Obstruction::NontrivialClass);
        }
    }

    #[test]
    fn rejects_non_representation() {
        let class = examples::z4().extension_class();
        let a = QuotientAlgebra::new(&class, 3).unwrap();
        let bad = QModule::new(PolyMatrix::zeros(1, 1, 1), vec![BitMatrix::identity(1)]).unwrap();
        assert!(matches!(Complex::new(&a, &bad), Err(Error::NotRepresentation)));
        let nc = examples::non_closed().extension_class();
        let a = QuotientAlgebra::new(&nc, 3).unwrap();
        assert!(matches!(Complex::new(&a, &QModule::trivial(1, 3, 1)), Err(Error::NotClosed)));
    }
}
