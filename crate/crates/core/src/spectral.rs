//! The first two pages of the Bockstein spectral sequence of `G(Q)`.
//!
//! `B_1` is modeled as `F_2[s_1..s_n] ⊗ A*(Q)` with `s_j` in degree 2 and
//! the Bockstein extended as a derivation from `β(x_i) = x_i²` and
//! `β(s) = Ls + η`. `B_2` is its homology, computed directly by ranks and
//! independently as `⊕_i H^{*-2i}(Q, Sym^i)`.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::bockstein::{module_from_l, QModule};
use crate::cohomology::{sym_power_module, Complex, Obstruction};
use crate::gf2::{BitMatrix, BitVec};
use crate::ideal::QuotientAlgebra;
use crate::poly::{Monomial, Poly, PolyMatrix};
use crate::{Error, Result};

/// How a page was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Direct,
    Decomposition,
}

/// Dimensions of a page, one per total degree `0..dims.len()`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BPage {
    pub max_degree: usize,
    pub dims: Vec<usize>,
    pub provenance: Provenance,
}

/// An element `Σ_α s^α f_α`, keyed by the `s`-monomial, coefficients in
/// normal form.
pub type B1Element = BTreeMap<Monomial, Poly>;

#[derive(Clone, Debug)]
struct Block {
    alpha: Monomial,
    p: usize,
    offset: usize,
    len: usize,
}

#[derive(Clone, Debug, Default)]
struct Layout {
    blocks: Vec<Block>,
    by_alpha: HashMap<Monomial, usize>,
    dim: usize,
}

/// `F_2[s] ⊗ A*(Q)` with its Bockstein, truncated at `max_degree`.
#[derive(Debug)]
pub struct B1Model<'a> {
    algebra: &'a QuotientAlgebra,
    l: PolyMatrix,
    eta: Vec<Poly>,
    max_degree: usize,
    layouts: Vec<Layout>,
}

impl<'a> B1Model<'a> {
    /// Fails with `InconsistentEta` if `β²` does not vanish on the `s_j`.
    pub fn new(algebra: &'a QuotientAlgebra, l: &PolyMatrix, eta: &[Poly], max_degree: usize) -> Result<Self> {
        let n = algebra.class().len();
        if l.nrows() != n || l.ncols() != n || eta.len() != n {
            return Err(Error::DimensionMismatch {
                what: "L and η must match dim V".into(),
                expected: n,
                found: l.nrows(),
            });
        }
        for e in eta {
            if !e.is_homogeneous_of(3) {
                return Err(Error::Refused(format!("η entry {e} is not homogeneous of degree 3")));
            }
        }
        let eta = eta.iter().map(|e| algebra.normal_form(e)).collect::<Result<Vec<_>>>()?;
        let mut layouts = Vec::with_capacity(max_degree + 1);
        for t in 0..=max_degree {
            let mut layout = Layout::default();
            for i in 0..=t / 2 {
                let p = t - 2 * i;
                let len = algebra.dim(p)?;
                for alpha in Monomial::all_of_degree(n, i) {
                    if len > 0 {
                        layout.by_alpha.insert(alpha.clone(), layout.blocks.len());
                        layout.blocks.push(Block {
                            alpha,
                            p,
                            offset: layout.dim,
                            len,
                        });
                        layout.dim += len;
                    }
                }
            }
            layouts.push(layout);
        }
        let model = Self {
            algebra,
            l: l.clone(),
            eta,
            max_degree,
            layouts,
        };
        model.check_beta_squared()?;
        Ok(model)
    }

    fn nvars(&self) -> usize {
        self.algebra.nvars()
    }

    fn n(&self) -> usize {
        self.eta.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.layouts.iter().map(|l| l.dim).collect()
    }

    pub fn page(&self) -> BPage {
        BPage {
            max_degree: self.max_degree,
            dims: self.dims(),
            provenance: Provenance::Direct,
        }
    }

    /// `s_j` as an element.
    pub fn s(&self, j: usize) -> B1Element {
        let mut e = B1Element::new();
        e.insert(Monomial::var(self.n(), j), Poly::one(self.nvars()));
        e
    }

    /// `f ∈ A*(Q)` as an element.
    pub fn scalar(&self, f: &Poly) -> Result<B1Element> {
        let mut e = B1Element::new();
        let f = self.algebra.normal_form(f)?;
        if !f.is_zero() {
            e.insert(Monomial::one(self.n()), f);
        }
        Ok(e)
    }

    fn add_into(&self, out: &mut B1Element, alpha: Monomial, f: &Poly) -> Result<()> {
        let f = self.algebra.normal_form(f)?;
        if f.is_zero() {
            return Ok(());
        }
        let entry = out.entry(alpha).or_insert_with(|| Poly::zero(f.nvars()));
        *entry += &f;
        Ok(())
    }

    /// The Bockstein as a derivation: `β(s^α f) = s^α β(f) + D(s^α) f`
    /// with `D(s_j) = Σ_l L[j][l] s_l + η_j`.
    pub fn beta(&self, e: &B1Element) -> Result<B1Element> {
        let mut out = B1Element::new();
        for (alpha, f) in e {
            self.add_into(&mut out, alpha.clone(), &f.bockstein())?;
            for j in 0..self.n() {
                if alpha.exponent(j) % 2 == 0 {
                    continue;
                }
                let rest = alpha.div_var(j).expect("odd exponent");
                for l in 0..self.n() {
                    let c = self.l.get(j, l);
                    if !c.is_zero() {
                        self.add_into(&mut out, rest.times_var(l), &(c * f))?;
                    }
                }
                if !self.eta[j].is_zero() {
                    self.add_into(&mut out, rest.clone(), &(&self.eta[j] * f))?;
                }
            }
        }
        out.retain(|_, f| !f.is_zero());
        Ok(out)
    }

    pub fn mul(&self, a: &B1Element, b: &B1Element) -> Result<B1Element> {
        let mut out = B1Element::new();
        for (alpha, f) in a {
            for (gamma, g) in b {
                self.add_into(&mut out, alpha.mul(gamma), &(f * g))?;
            }
        }
        out.retain(|_, f| !f.is_zero());
        Ok(out)
    }

    fn check_beta_squared(&self) -> Result<()> {
        for j in 0..self.n() {
            let twice = self.beta(&self.beta(&self.s(j))?)?;
            if !twice.is_empty() {
                return Err(Error::InconsistentEta(format!("s_{}", j + 1)));
            }
        }
        Ok(())
    }

    /// Basis element `index` of total degree `t`.
    pub fn basis_element(&self, t: usize, index: usize) -> Result<B1Element> {
        let layout = &self.layouts[t];
        let block = layout
            .blocks
            .iter()
            .find(|b| index < b.offset + b.len)
            .ok_or_else(|| Error::Internal("basis index out of range".into()))?;
        let f = self
            .algebra
            .from_coords(block.p, &BitVec::unit(block.len, index - block.offset))?;
        let mut e = B1Element::new();
        e.insert(block.alpha.clone(), f);
        Ok(e)
    }

    /// Coordinates of a homogeneous element of total degree `t`.
    pub fn coords(&self, t: usize, e: &B1Element) -> Result<BitVec> {
        let layout = self.layouts.get(t).ok_or(Error::TruncationExceeded {
            degree: t,
            max_degree: self.max_degree,
        })?;
        let mut v = BitVec::zeros(layout.dim);
        for (alpha, f) in e {
            let Some(&bi) = layout.by_alpha.get(alpha) else {
                if f.is_zero() {
                    continue;
                }
                return Err(Error::Internal("element has a component outside degree t".into()));
            };
            let block = &layout.blocks[bi];
            for c in self.algebra.coords(block.p, f)?.ones() {
                v.set(block.offset + c, true);
            }
        }
        Ok(v)
    }

    /// Matrix of `β` from total degree `t` to `t + 1`.
    pub fn beta_matrix(&self, t: usize) -> Result<BitMatrix> {
        if t + 1 > self.max_degree {
            return Err(Error::TruncationExceeded {
                degree: t + 1,
                max_degree: self.max_degree,
            });
        }
        let cols = (0..self.layouts[t].dim)
            .map(|idx| self.coords(t + 1, &self.beta(&self.basis_element(t, idx)?)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(BitMatrix::from_columns(&cols, self.layouts[t + 1].dim))
    }

    /// `dim B_2^t = dim ker β_t - rank β_{t-1}` for `t < max_degree`.
    pub fn b2_direct(&self) -> Result<BPage> {
        let mut ranks = Vec::with_capacity(self.max_degree);
        for t in 0..self.max_degree {
            ranks.push(self.beta_matrix(t)?.rank());
        }
        let dims = (0..self.max_degree)
            .map(|t| self.layouts[t].dim - ranks[t] - if t == 0 { 0 } else { ranks[t - 1] })
            .collect();
        Ok(BPage {
            max_degree: self.max_degree,
            dims,
            provenance: Provenance::Direct,
        })
    }
}

/// `dim B_2^s = Σ_i dim H^{s-2i}(Q, Sym^i)` for `s < max_degree`, where
/// `Sym^i` is the symmetric power of the transposed `L`-module: the
/// coefficient of `s^γ` in `β(Σ_α f_α s^α)` is `β(f_γ) + Σ_α R[γ][α] f_α`
/// with `R = L^T` on `Sym^1`.
///
/// A nonzero `η` is accepted only when `[η] = 0`; then `s' = s + ξ` with
/// `η = δ(ξ)` brings the differential to `β(s') = Ls'`.
pub fn b2_decomposition(algebra: &QuotientAlgebra, l: &PolyMatrix, eta: &[Poly], max_degree: usize) -> Result<BPage> {
    let class = algebra.class();
    let lm = module_from_l(class, l)?;
    let complex = Complex::new(algebra, &lm)?;
    let eta_cochain = complex.cochain(3, eta.to_vec())?;
    if !eta_cochain.is_zero() {
        match complex.obstruction_test(&eta_cochain)? {
            Obstruction::NotCocycle => {
                return Err(Error::InconsistentEta("the generators s_j".into()));
            }
            Obstruction::NontrivialClass => {
                return Err(Error::Refused(
                    "[η] is a nonzero class; no uniform double lifting, decomposition does not apply".into(),
                ));
            }
            Obstruction::Coboundary(xi) => {
                let shifted: Vec<Poly> = eta_cochain
                    .entries()
                    .iter()
                    .zip(complex.differential(&xi)?.entries())
                    .map(|(a, b)| a + b)
                    .collect();
                if !complex.cochain(3, shifted)?.is_zero() {
                    return Err(Error::Internal("η + δ(ξ) did not vanish".into()));
                }
            }
        }
    }
    let dual = lm.transpose();
    let mut dims = vec![0usize; max_degree];
    for i in 0..=max_degree.saturating_sub(1) / 2 {
        let sym: QModule = sym_power_module(class, &dual, i)?;
        let c = Complex::new(algebra, &sym)?;
        for (s, d) in dims.iter_mut().enumerate().skip(2 * i) {
            *d += c.cohomology_dim(s - 2 * i)?;
        }
    }
    Ok(BPage {
        max_degree,
        dims,
        provenance: Provenance::Decomposition,
    })
}

/// Positive degrees with `B_2^s ≠ 0`: integral cohomology in degree `s`
/// (or `s + 1`) has torsion of exponent at least 4 there. The exact
/// exponent would need later pages.
pub fn torsion_report(b2: &BPage) -> Vec<usize> {
    b2.dims
        .iter()
        .enumerate()
        .filter(|&(s, &d)| s > 0 && d > 0)
        .map(|(s, _)| s)
        .collect()
}

/// Serializable summary of both pages.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralReport {
    #[serde(rename = "B1")]
    pub b1: Vec<usize>,
    #[serde(rename = "B2_direct")]
    pub b2_direct: Vec<usize>,
    #[serde(rename = "B2_decomp")]
    pub b2_decomp: Vec<usize>,
    pub torsion_ge4_degrees: Vec<usize>,
}

/// Coefficients of `(1 + t)^n / (1 - t²)^n`, the `B_1` series of a
/// 2-power exact map with `n` generators.
pub fn product_series(n: usize, len: usize) -> Vec<usize> {
    // (1 + t)^n / (1 - t²)^n = 1 / (1 - t)^n
    (0..len).map(|d| crate::ideal::monomial_count(n, d)).collect()
}
