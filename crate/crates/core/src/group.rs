//! The finite 2-group `G(Q)` as a central extension of `W` by `V`.
//!
//! Elements are `(v, w)` packed as the index `v | (w << n)`, and
//! `(v, w)(v', w') = (v + v' + f(w, w'), w + w')`, where `f` is the
//! bilinear factor set with `f(e_i, e_i) = Q(e_i)`, `f(e_i, e_j) = B(e_i, e_j)`
//! for `i < j` and zero below the diagonal.

use std::collections::{BTreeSet, VecDeque};
use std::io::Write;

use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::gf2::{BitMatrix, BitVec, LinearSystem};
use crate::poly::PolyMatrix;
use crate::quadmap::{QuadMorphism, QuadraticMap};
use crate::{Error, Result};

/// Largest `m + n` accepted by [`build_group`].
pub const GROUP_BITS_CAP: usize = 20;

/// Largest exponent `k` for which a check over `2^k` cases runs in full.
pub const EXHAUSTIVE_BITS: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
enum FactorSet {
    /// `f(w, w') = Σ_i w_i partial[i][w']`, where `partial[i][w']` is
    /// `Σ_j w'_j f(e_i, e_j)`.
    Bilinear(Vec<Vec<u64>>),
    /// Arbitrary `f`, indexed by `w | (w' << m)`.
    Table(Vec<u64>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTwoGroup {
    m: usize,
    n: usize,
    factor: FactorSet,
}

fn bits(mut x: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (x != 0).then(|| {
            let i = x.trailing_zeros() as usize;
            x &= x - 1;
            i
        })
    })
}

/// Builds `G(Q)`; fails when `m + n` exceeds the cap.
pub fn build_group(q: &QuadraticMap) -> Result<FiniteTwoGroup> {
    build_group_with_cap(q, 1 << GROUP_BITS_CAP)
}

/// As [`build_group`] with an explicit bound on the order.
pub fn build_group_with_cap(q: &QuadraticMap, order_cap: u64) -> Result<FiniteTwoGroup> {
    let (m, n) = (q.m(), q.n());
    let bits = m + n;
    if bits > GROUP_BITS_CAP || bits >= 64 || (1u64 << bits) > order_cap {
        return Err(Error::CapExceeded {
            what: "group order".into(),
            limit: order_cap.min(1 << GROUP_BITS_CAP) as usize,
            requested: if bits >= 64 { usize::MAX } else { 1 << bits },
        });
    }
    let mut rows = vec![vec![0u64; m]; m];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = q.q_basis(i).to_u64();
        for (j, cell) in row.iter_mut().enumerate().skip(i + 1) {
            *cell = q.b(i, j).to_u64();
        }
    }
    let partial = rows
        .iter()
        .map(|row| {
            let mut sums = vec![0u64; 1 << m];
            for w2 in 1..1usize << m {
                let low = w2.trailing_zeros() as usize;
                sums[w2] = sums[w2 & (w2 - 1)] ^ row[low];
            }
            sums
        })
        .collect();
    Ok(FiniteTwoGroup {
        m,
        n,
        factor: FactorSet::Bilinear(partial),
    })
}

impl FiniteTwoGroup {
    /// A group from an arbitrary factor set `table[w | (w' << m)]`. The
    /// result need not be associative.
    pub fn from_factor_table(m: usize, n: usize, table: Vec<u64>) -> Result<Self> {
        if m + n > GROUP_BITS_CAP || table.len() != 1 << (2 * m) {
            return Err(Error::DimensionMismatch {
                what: "factor table".into(),
                expected: 1 << (2 * m),
                found: table.len(),
            });
        }
        Ok(Self {
            m,
            n,
            factor: FactorSet::Table(table),
        })
    }

    /// The factor set tabulated over `W × W`.
    pub fn factor_table(&self) -> Vec<u64> {
        let size = 1usize << self.m;
        let mut out = vec![0; size * size];
        for w2 in 0..size {
            for w in 0..size {
                out[w | (w2 << self.m)] = self.factor(w as u64, w2 as u64);
            }
        }
        out
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u64 {
        1 << (self.m + self.n)
    }

    pub fn identity(&self) -> u64 {
        0
    }

    pub fn element(&self, v: u64, w: u64) -> u64 {
        v | (w << self.n)
    }

    /// `(v, w)` of an element.
    pub fn parts(&self, g: u64) -> (u64, u64) {
        (g & ((1 << self.n) - 1), g >> self.n)
    }

    pub fn factor(&self, w: u64, w2: u64) -> u64 {
        match &self.factor {
            FactorSet::Bilinear(partial) => bits(w).fold(0, |acc, i| acc ^ partial[i][w2 as usize]),
            FactorSet::Table(t) => t[(w | (w2 << self.m)) as usize],
        }
    }

    pub fn mul(&self, g: u64, h: u64) -> u64 {
        let (v, w) = self.parts(g);
        let (v2, w2) = self.parts(h);
        self.element(v ^ v2 ^ self.factor(w, w2), w ^ w2)
    }

    pub fn pow(&self, g: u64, k: usize) -> u64 {
        (0..k).fold(self.identity(), |acc, _| self.mul(acc, g))
    }

    pub fn inverse(&self, g: u64) -> u64 {
        // every element has order dividing 4
        let g2 = self.mul(g, g);
        if g2 == 0 {
            g
        } else {
            self.mul(g2, g)
        }
    }

    pub fn commutator(&self, g: u64, h: u64) -> u64 {
        let gh = self.mul(g, h);
        let hg = self.mul(h, g);
        self.mul(gh, self.inverse(hg))
    }

    pub fn element_order(&self, g: u64) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
            if k > 64 {
                break;
            }
        }
        k
    }

    /// `(e_j, 0)` and `(0, e_i)`.
    pub fn generators(&self) -> Vec<u64> {
        (0..self.n)
            .map(|j| self.element(1 << j, 0))
            .chain((0..self.m).map(|i| self.element(0, 1 << i)))
            .collect()
    }

    /// Closure of `gens` under multiplication.
    pub fn subgroup_generated(&self, gens: &[u64]) -> BTreeSet<u64> {
        let mut seen = BTreeSet::from([self.identity()]);
        let mut queue = VecDeque::from([self.identity()]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// Elements commuting with every generator.
    pub fn center(&self) -> Vec<u64> {
        let gens = self.generators();
        (0..self.order())
            .filter(|&g| gens.iter().all(|&h| self.mul(g, h) == self.mul(h, g)))
            .collect()
    }

    /// Subgroup generated by all squares and commutators.
    pub fn frattini(&self) -> BTreeSet<u64> {
        let mut gens = BTreeSet::new();
        for g in 0..self.order() {
            gens.insert(self.mul(g, g));
        }
        for g in self.generators() {
            for h in self.generators() {
                gens.insert(self.commutator(g, h));
            }
        }
        gens.remove(&0);
        self.subgroup_generated(&gens.into_iter().collect::<Vec<_>>())
    }

    /// Elements of order at most 2.
    pub fn involutions(&self) -> Vec<u64> {
        (0..self.order()).filter(|&g| self.mul(g, g) == 0).collect()
    }

    /// Writes `a b ab` for every pair, one per line.
    pub fn write_table(&self, out: &mut impl Write) -> std::io::Result<()> {
        for a in 0..self.order() {
            for b in 0..self.order() {
                writeln!(out, "{a} {b} {}", self.mul(a, b))?;
            }
        }
        Ok(())
    }
}

/// Maximal rank of an elementary abelian subgroup.
///
/// Such a subgroup lies over a subspace `U ⊆ W` on which `Q` vanishes, and
/// the full preimage `V × U` of such a `U` is elementary abelian, so the
/// answer is `n` plus the largest dimension of a totally singular subspace.
pub fn two_rank(q: &QuadraticMap) -> Result<usize> {
    if q.m() > EXHAUSTIVE_BITS {
        return Err(Error::CapExceeded {
            what: "2-rank search".into(),
            limit: 1 << EXHAUSTIVE_BITS,
            requested: 1 << q.m().min(63),
        });
    }
    let mut zeros = Vec::new();
    q.try_for_each_value(|w, value| {
        if w != 0 && value.is_zero() {
            zeros.push(w);
        }
        true
    })?;
    let b = |w: u64, w2: u64| -> Result<bool> {
        Ok(!q.bilinear(&BitVec::from_u64(w, q.m()), &BitVec::from_u64(w2, q.m()))?.is_zero())
    };
    let mut best = 0;
    search(q.m(), &zeros, &mut Vec::new(), &mut best, &b)?;
    Ok(q.n() + best)
}

fn span_rank(m: usize, vectors: &[u64]) -> usize {
    let mut basis = crate::gf2::EchelonBasis::new(m);
    for &v in vectors {
        basis.insert(BitVec::from_u64(v, m));
    }
    basis.rank()
}

fn search(
    m: usize,
    candidates: &[u64],
    chosen: &mut Vec<u64>,
    best: &mut usize,
    b: &impl Fn(u64, u64) -> Result<bool>,
) -> Result<()> {
    *best = (*best).max(chosen.len());
    if chosen.len() + span_rank(m, candidates) <= *best {
        return Ok(());
    }
    for (idx, &c) in candidates.iter().enumerate() {
        let mut rest = Vec::new();
        for &d in &candidates[idx + 1..] {
            if !b(c, d)? {
                // stay outside span(chosen, c)
                let mut probe = chosen.clone();
                probe.push(c);
                let r = span_rank(m, &probe);
                probe.push(d);
                if span_rank(m, &probe) > r {
                    rest.push(d);
                }
            }
        }
        chosen.push(c);
        search(m, &rest, chosen, best, b)?;
        chosen.pop();
        if chosen.len() + span_rank(m, &candidates[idx + 1..]) <= *best {
            break;
        }
    }
    Ok(())
}

/// One failed identity with the elements that witness it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub identity: String,
    pub witness: Vec<u64>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct StructureReport {
    pub order: u64,
    /// Each identity checked, with whether the check covered every case.
    pub checks: Vec<(String, bool)>,
    pub failures: Vec<Failure>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, name: &str, exhaustive: bool, failure: Option<Vec<u64>>) {
        self.checks.push((name.to_string(), exhaustive));
        if let Some(witness) = failure {
            self.failures.push(Failure {
                identity: name.to_string(),
                witness,
            });
        }
    }
}

/// Runs `check` on every tuple in `0..2^bits` when that is at most
/// `2^EXHAUSTIVE_BITS`, otherwise on a fixed-seed sample of that size.
fn scan(bits: usize, mut check: impl FnMut(u64) -> Option<Vec<u64>>) -> (bool, Option<Vec<u64>>) {
    if bits <= EXHAUSTIVE_BITS {
        for x in 0..(1u64 << bits) {
            if let Some(w) = check(x) {
                return (true, Some(w));
            }
        }
        (true, None)
    } else {
        let mut rng = rand::rngs::StdRng::seed_from_u64(0);
        let mask = if bits >= 64 { u64::MAX } else { (1 << bits) - 1 };
        for _ in 0..(1u64 << EXHAUSTIVE_BITS) {
            if let Some(w) = check(rng.gen::<u64>() & mask) {
                return (false, Some(w));
            }
        }
        (false, None)
    }
}

/// Checks the group axioms and the dictionary with `(Q, B)`.
///
/// Associativity reduces to the cocycle identity
/// `f(a, b) + f(a + b, c) = f(b, c) + f(a, b + c)` on `W³`, since the
/// `V`-parts enter linearly; the remaining identities are checked on
/// elements.
pub fn verify_structure(g: &FiniteTwoGroup, q: &QuadraticMap) -> Result<StructureReport> {
    if g.m() != q.m() || g.n() != q.n() {
        return Err(Error::DimensionMismatch {
            what: "group and quadratic map".into(),
            expected: q.m() + q.n(),
            found: g.m() + g.n(),
        });
    }
    let (m, n) = (g.m(), g.n());
    let wmask = (1u64 << m) - 1;
    let mut report = StructureReport {
        order: g.order(),
        ..Default::default()
    };

    if g.mul(0, 0) != 0 || (0..g.order()).any(|x| g.mul(0, x) != x || g.mul(x, 0) != x) {
        report.record("identity", true, Some(vec![0]));
    } else {
        report.record("identity", true, None);
    }

    let (ex, fail) = scan(3 * m, |t| {
        let (a, b, c) = (t & wmask, (t >> m) & wmask, (t >> (2 * m)) & wmask);
        let lhs = g.factor(a, b) ^ g.factor(a ^ b, c);
        let rhs = g.factor(b, c) ^ g.factor(a, b ^ c);
        (lhs != rhs).then(|| vec![g.element(0, a), g.element(0, b), g.element(0, c)])
    });
    report.record("associativity", ex, fail);

    let qv = |w: u64| -> Result<u64> { Ok(q.eval(&BitVec::from_u64(w, m))?.to_u64()) };
    let mut fail = None;
    for w in 0..=wmask {
        let x = g.element(0, w);
        if g.mul(x, x) != g.element(qv(w)?, 0) {
            fail = Some(vec![x]);
            break;
        }
    }
    report.record("(0,w)^2 = (Q(w),0)", true, fail);

    let mut err = None;
    let (ex, fail) = scan(2 * m, |t| {
        let (a, b) = (t & wmask, t >> m);
        let expected = match q.bilinear(&BitVec::from_u64(a, m), &BitVec::from_u64(b, m)) {
            Ok(v) => v.to_u64(),
            Err(e) => {
                err = Some(e);
                return Some(vec![]);
            }
        };
        let (x, y) = (g.element(0, a), g.element(0, b));
        (g.commutator(x, y) != g.element(expected, 0)).then(|| vec![x, y])
    });
    if let Some(e) = err {
        return Err(e);
    }
    report.record("[(0,w),(0,w')] = (B(w,w'),0)", ex, fail);

    let (ex, fail) = scan(m + n + n.max(1).ilog2() as usize + 1, |t| {
        let x = t & (g.order() - 1);
        let j = (t >> (m + n)) as usize;
        if j >= n {
            return None;
        }
        let v = g.element(1 << j, 0);
        (g.mul(x, v) != g.mul(v, x)).then(|| vec![x, v])
    });
    report.record("V central", ex, fail);

    let (ex, fail) = scan(m + n, |x| {
        let (_, w) = g.parts(g.mul(x, x));
        (w != 0).then(|| vec![x])
    });
    report.record("G/V elementary abelian", ex, fail);

    let (ex, fail) = scan(m + n, |x| {
        let x2 = g.mul(x, x);
        (g.mul(x2, x2) != 0).then(|| vec![x])
    });
    report.record("g^4 = 1", ex, fail);

    Ok(report)
}

/// A homomorphism `G(Q_1) → G(Q_2)`, `(v, w) ↦ (f_V(v) + t(w), f_W(w))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    pub morphism: QuadMorphism,
    /// `t(w)` for every `w ∈ W_1`.
    pub t: Vec<u64>,
    n1: usize,
    n2: usize,
    fv_cols: Vec<u64>,
    fw_cols: Vec<u64>,
}

fn columns(a: &BitMatrix) -> Vec<u64> {
    (0..a.ncols()).map(|j| a.column(j).to_u64()).collect()
}

fn apply_cols(cols: &[u64], x: u64) -> u64 {
    bits(x).fold(0, |acc, j| acc ^ cols[j])
}

impl GroupHom {
    pub fn apply(&self, g: u64) -> u64 {
        let v = g & ((1 << self.n1) - 1);
        let w = g >> self.n1;
        let fv = apply_cols(&self.fv_cols, v);
        let fw = apply_cols(&self.fw_cols, w);
        (fv ^ self.t[w as usize]) | (fw << self.n2)
    }

    /// Image of every element, in index order.
    pub fn table(&self, source_order: u64) -> Vec<u64> {
        (0..source_order).map(|g| self.apply(g)).collect()
    }
}

/// Largest `m_1` for which `t` is found by solving the full linear system
/// in the `2^{m_1} n_2` values of `t`.
pub const REALIZE_SOLVE_BITS: usize = 8;

/// Lifts a morphism of quadratic maps to a group homomorphism by solving
/// `t(w) + t(w') + t(w + w') = f_V(f_1(w, w')) + f_2(f_W w, f_W w')`.
pub fn realize_morphism(phi: &QuadMorphism, g1: &FiniteTwoGroup, g2: &FiniteTwoGroup) -> Result<GroupHom> {
    let (m1, n1, m2, n2) = (g1.m(), g1.n(), g2.m(), g2.n());
    if phi.f_w.nrows() != m2 || phi.f_w.ncols() != m1 || phi.f_v.nrows() != n2 || phi.f_v.ncols() != n1 {
        return Err(Error::DimensionMismatch {
            what: "morphism and groups".into(),
            expected: m1 + n1,
            found: phi.f_w.ncols() + phi.f_v.ncols(),
        });
    }
    let (fw_cols, fv_cols) = (columns(&phi.f_w), columns(&phi.f_v));
    let fw = |w: u64| apply_cols(&fw_cols, w);
    let fv = |v: u64| apply_cols(&fv_cols, v);
    let c = |a: u64, b: u64| fv(g1.factor(a, b)) ^ g2.factor(fw(a), fw(b));
    let size = 1usize << m1;
    let t = if m1 <= REALIZE_SOLVE_BITS {
        // unknowns t(1), ..., t(2^m1 - 1); t(0) = 0
        let mut sys = LinearSystem::new(size - 1, n2);
        for a in 1..size as u64 {
            for b in 1..size as u64 {
                let mut coeffs = BitVec::zeros(size - 1);
                for x in [a, b, a ^ b] {
                    if x != 0 {
                        coeffs.flip(x as usize - 1);
                    }
                }
                sys.push_equation(&coeffs, &BitVec::from_u64(c(a, b), n2));
            }
        }
        let sol = sys
            .solve()
            .map_err(|_| Error::Internal("no t solves the coboundary equation; morphism invalid".into()))?;
        std::iter::once(0)
            .chain((0..size - 1).map(|x| sol.particular.row(x).to_u64()))
            .collect()
    } else {
        // c is alternating bilinear: t(w) = Σ_{i<j} w_i w_j c(e_i, e_j)
        (0..size as u64)
            .map(|w| {
                let mut out = 0;
                for i in bits(w) {
                    for j in bits(w).filter(|&j| j > i) {
                        out ^= c(1 << i, 1 << j);
                    }
                }
                out
            })
            .collect()
    };
    let hom = GroupHom {
        morphism: phi.clone(),
        t,
        n1,
        n2,
        fv_cols,
        fw_cols,
    };
    if let Some(pair) = homomorphism_failure(&hom, g1, g2) {
        return Err(Error::Internal(format!(
            "lifted map fails to be a homomorphism at {pair:?}"
        )));
    }
    Ok(hom)
}

/// A pair `(g, h)` with `f(gh) ≠ f(g) f(h)`, if any. Exhaustive over
/// `G_1 × G_1` within the cap, otherwise over `W_1 × W_1` plus generators.
pub fn homomorphism_failure(hom: &GroupHom, g1: &FiniteTwoGroup, g2: &FiniteTwoGroup) -> Option<(u64, u64)> {
    let bad = |a: u64, b: u64| hom.apply(g1.mul(a, b)) != g2.mul(hom.apply(a), hom.apply(b));
    let bits1 = g1.m() + g1.n();
    if 2 * bits1 <= EXHAUSTIVE_BITS {
        for a in 0..g1.order() {
            for b in 0..g1.order() {
                if bad(a, b) {
                    return Some((a, b));
                }
            }
        }
        return None;
    }
    let ws: Vec<u64> = (0..1u64 << g1.m().min(EXHAUSTIVE_BITS / 2)).map(|w| g1.element(0, w)).collect();
    for &a in ws.iter().chain(g1.generators().iter()) {
        for &b in ws.iter().chain(g1.generators().iter()) {
            if bad(a, b) {
                return Some((a, b));
            }
        }
    }
    None
}

/// A square matrix over `Z/4`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Z4Matrix {
    pub n: usize,
    pub entries: Vec<u8>,
}

impl Z4Matrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        Self { n, entries }
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.n + j]
    }

    /// `I + 2A` for a matrix `A` over `F_2`.
    pub fn one_plus_two(a: &BitMatrix) -> Self {
        let mut out = Self::identity(a.nrows());
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                if a.get(i, j) {
                    out.entries[i * out.n + j] = (out.entries[i * out.n + j] + 2) % 4;
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut entries = vec![0u8; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let e = &mut entries[i * n + j];
                    *e = (*e + a * other.get(k, j)) % 4;
                }
            }
        }
        Self { n, entries }
    }
}

/// The `Z/4[W]`-lattice `M = (Z/4)^n` with `w` acting by `I + 2L(w)`.
#[derive(Clone, Debug)]
pub struct LatticeM {
    pub n: usize,
    l: PolyMatrix,
}

impl LatticeM {
    pub fn action(&self, w: &BitVec) -> Z4Matrix {
        Z4Matrix::one_plus_two(&self.l.eval(w))
    }

    /// A pair `(w, w')` breaking multiplicativity, if any.
    pub fn multiplicativity_failure(&self) -> Option<(BitVec, BitVec)> {
        let m = self.l.nvars();
        let (_, fail) = scan(2 * m, |t| {
            let a = t & ((1 << m) - 1);
            let b = t >> m;
            let (wa, wb) = (BitVec::from_u64(a, m), BitVec::from_u64(b, m));
            let lhs = self.action(&wa).mul(&self.action(&wb));
            (lhs != self.action(&(&wa ^ &wb))).then(|| vec![a, b])
        });
        fail.map(|w| (BitVec::from_u64(w[0], m), BitVec::from_u64(w[1], m)))
    }
}

/// Builds `M` from a solution `L` of the closedness equation.
pub fn lattice_m(l: &PolyMatrix) -> Result<LatticeM> {
    if l.nrows() != l.ncols() || !l.is_homogeneous_of(1) {
        return Err(Error::DimensionMismatch {
            what: "L must be square with linear entries".into(),
            expected: l.nrows(),
            found: l.ncols(),
        });
    }
    let lattice = LatticeM {
        n: l.nrows(),
        l: l.clone(),
    };
    if let Some((a, b)) = lattice.multiplicativity_failure() {
        return Err(Error::Internal(format!("I + 2L is not multiplicative at ({a}, {b})")));
    }
    Ok(lattice)
}
