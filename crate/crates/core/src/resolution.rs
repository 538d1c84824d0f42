//! Mod-2 Betti numbers of a small 2-group from a minimal free resolution
//! of `F_2` over `F_2 G`.
//!
//! A free module `F_2G^r` is a bit vector of length `r·|G|`, with bit
//! `j·|G| + g` the coefficient of `g` in component `j`; `G` acts on the left.

use serde::Serialize;

use crate::gf2::{BitMatrix, BitVec, EchelonBasis};
use crate::group::{build_group, FiniteTwoGroup};
use crate::ideal::{monomial_count, QuotientAlgebra};
use crate::quadmap::QuadraticMap;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResolutionCaps {
    pub max_order: u64,
    pub max_degree: usize,
}

impl Default for ResolutionCaps {
    fn default() -> Self {
        Self {
            max_order: 64,
            max_degree: 5,
        }
    }
}

/// `∂_i : F_i → F_{i-1}`; column `j·|G| + h` is `h·∂(e_j)`.
#[derive(Clone, Debug)]
pub struct ResolutionStage {
    pub index: usize,
    pub rank: usize,
    pub boundary: BitMatrix,
}

struct Action {
    order: usize,
    /// `table[h][g] = hg`, in positions.
    table: Vec<Vec<usize>>,
    generators: Vec<usize>,
}

impl Action {
    fn new(g: &FiniteTwoGroup, labels: &[u64]) -> Self {
        let order = labels.len();
        let mut pos = vec![0usize; order];
        for (p, &e) in labels.iter().enumerate() {
            pos[e as usize] = p;
        }
        let table = labels
            .iter()
            .map(|&h| labels.iter().map(|&x| pos[g.mul(h, x) as usize]).collect())
            .collect();
        let generators = g.generators().into_iter().map(|e| pos[e as usize]).collect();
        Self {
            order,
            table,
            generators,
        }
    }

    fn act(&self, h: usize, u: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(u.len());
        for bit in u.ones() {
            let (j, x) = (bit / self.order, bit % self.order);
            out.flip(j * self.order + self.table[h][x]);
        }
        out
    }

    /// Generators of `K` as a module, minimal: independent modulo `I·K`,
    /// where `I·K` is spanned by `(g + 1)k` for group generators `g`.
    fn minimal_generators(&self, kernel: &[BitVec], width: usize) -> Vec<BitVec> {
        let mut span = EchelonBasis::new(width);
        for k in kernel {
            for &g in &self.generators {
                let mut v = self.act(g, k);
                v.xor_with(k);
                span.insert(v);
            }
        }
        let mut gens = Vec::new();
        for k in kernel {
            if span.insert(k.clone()) {
                gens.push(k.clone());
            }
        }
        gens
    }

    fn boundary(&self, gens: &[BitVec], width: usize) -> BitMatrix {
        let mut cols = Vec::with_capacity(gens.len() * self.order);
        for u in gens {
            for h in 0..self.order {
                cols.push(self.act(h, u));
            }
        }
        BitMatrix::from_columns(&cols, width)
    }
}

/// Minimal resolution through `F_{max_degree}`, elements in `labels` order.
pub fn resolve(
    g: &FiniteTwoGroup,
    max_degree: usize,
    caps: ResolutionCaps,
    labels: Option<&[u64]>,
) -> Result<Vec<ResolutionStage>> {
    if g.order() > caps.max_order {
        return Err(Error::CapExceeded {
            what: "group order for resolution".into(),
            limit: caps.max_order as usize,
            requested: g.order() as usize,
        });
    }
    if max_degree > caps.max_degree {
        return Err(Error::CapExceeded {
            what: "resolution degree".into(),
            limit: caps.max_degree,
            requested: max_degree,
        });
    }
    let identity: Vec<u64> = (0..g.order()).collect();
    let labels = labels.unwrap_or(&identity);
    let action = Action::new(g, labels);
    let order = action.order;

    // ∂_0 = augmentation F_2G → F_2
    let augmentation = BitMatrix::from_rows(vec![BitVec::from_bools(&vec![true; order])], order);
    let mut stages = vec![ResolutionStage {
        index: 0,
        rank: 1,
        boundary: augmentation,
    }];
    while stages.len() <= max_degree {
        let prev = stages.last().expect("nonempty");
        let width = prev.rank * order;
        let kernel = prev.boundary.kernel();
        let gens = action.minimal_generators(&kernel, width);
        let boundary = action.boundary(&gens, width);
        stages.push(ResolutionStage {
            index: stages.len(),
            rank: gens.len(),
            boundary,
        });
    }
    Ok(stages)
}

/// `dim H^i(G; F_2)` for `i = 0..=max_degree`.
pub fn betti_numbers(g: &FiniteTwoGroup, max_degree: usize) -> Result<Vec<usize>> {
    betti_numbers_with_caps(g, max_degree, ResolutionCaps::default())
}

pub fn betti_numbers_with_caps(g: &FiniteTwoGroup, max_degree: usize, caps: ResolutionCaps) -> Result<Vec<usize>> {
    Ok(resolve(g, max_degree, caps, None)?.iter().map(|s| s.rank).collect())
}

/// Whether `∂_{i-1} ∂_i = 0` for every stage.
pub fn boundaries_compose_to_zero(stages: &[ResolutionStage]) -> bool {
    stages.windows(2).all(|w| w[0].boundary.mul(&w[1].boundary).rank() == 0)
}

/// Measured Betti numbers against `Hilb(A*(Q)) / (1 - t²)^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PoincareReport {
    pub betti: Vec<usize>,
    pub predicted: Vec<usize>,
    #[serde(rename = "match")]
    pub matches: bool,
}

/// Coefficients of `hilbert / (1 - t²)^n` through `max_degree`.
pub fn predicted_series(hilbert: &[usize], n: usize, max_degree: usize) -> Vec<usize> {
    (0..=max_degree)
        .map(|d| {
            (0..=d / 2)
                .map(|i| monomial_count(n, i) * hilbert.get(d - 2 * i).copied().unwrap_or(0))
                .sum()
        })
        .collect()
}

pub fn poincare_check(q: &QuadraticMap, max_degree: usize, caps: ResolutionCaps) -> Result<PoincareReport> {
    let class = q.extension_class();
    let algebra = QuotientAlgebra::new(&class, max_degree.max(1))?;
    let predicted = predicted_series(&algebra.hilbert_series(), q.n(), max_degree);
    let g = build_group(q)?;
    let betti = betti_numbers_with_caps(&g, max_degree, caps)?;
    Ok(PoincareReport {
        matches: betti == predicted,
        betti,
        predicted,
    })
}
