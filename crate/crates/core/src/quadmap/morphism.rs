use super::QuadraticMap;
use crate::gf2::{BitMatrix, BitVec, EchelonBasis};
use crate::poly::Poly;
use crate::{Error, Result};

/// Largest `dim W_2 + dim Im f_W` for which cokernel well-definedness is
/// checked point by point.
const COKERNEL_CHECK_CAP: usize = 20;

/// A morphism of quadratic maps `(f_W, f_V): Q_1 → Q_2`, matrices acting on
/// column vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadMorphism {
    pub f_w: BitMatrix,
    pub f_v: BitMatrix,
}

/// A quadratic map on subspaces of a larger one, with the inclusion.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub map: QuadraticMap,
    pub inclusion: QuadMorphism,
}

/// The cokernel map with the projection onto it.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub map: QuadraticMap,
    pub projection: QuadMorphism,
}

/// Subspace in reduced echelon form; coordinates are read off the pivots.
struct Subspace {
    rows: Vec<BitVec>,
    pivots: Vec<usize>,
}

impl Subspace {
    fn span(width: usize, vectors: impl IntoIterator<Item = BitVec>) -> Self {
        let mut e = EchelonBasis::new(width);
        for v in vectors {
            e.insert(v);
        }
        let rows = e.reduced_rows();
        let pivots = rows.iter().map(|r| r.first_one().unwrap()).collect();
        Self { rows, pivots }
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }

    fn coords(&self, v: &BitVec) -> Option<BitVec> {
        let mut c = BitVec::zeros(self.dim());
        let mut rest = v.clone();
        for (k, (row, &p)) in self.rows.iter().zip(&self.pivots).enumerate() {
            if v.get(p) {
                c.set(k, true);
                rest.xor_with(row);
            }
        }
        rest.is_zero().then_some(c)
    }

    fn inclusion(&self, width: usize) -> BitMatrix {
        BitMatrix::from_columns(&self.rows, width)
    }
}

/// `Q` restricted to `W' → V'`; fails if `Q(W') ⊄ V'`.
fn restrict(q: &QuadraticMap, w_sub: &Subspace, v_sub: &Subspace) -> Result<Restriction> {
    let coords = |v: BitVec| {
        v_sub
            .coords(&v)
            .ok_or_else(|| Error::InvalidMap("restriction does not land in the target subspace".into()))
    };
    let ws = &w_sub.rows;
    let q_vals = ws
        .iter()
        .map(|w| coords(q.eval(w)?))
        .collect::<Result<Vec<_>>>()?;
    let mut pairs = Vec::new();
    for i in 0..ws.len() {
        for j in i + 1..ws.len() {
            pairs.push(((i, j), coords(q.bilinear(&ws[i], &ws[j])?)?));
        }
    }
    Ok(Restriction {
        map: QuadraticMap::new(w_sub.dim(), v_sub.dim(), q_vals, pairs)?,
        inclusion: QuadMorphism {
            f_w: w_sub.inclusion(q.m()),
            f_v: v_sub.inclusion(q.n()),
        },
    })
}

impl QuadMorphism {
    pub fn new(f_w: BitMatrix, f_v: BitMatrix) -> Self {
        Self { f_w, f_v }
    }

    pub fn identity(q: &QuadraticMap) -> Self {
        Self::new(BitMatrix::identity(q.m()), BitMatrix::identity(q.n()))
    }

    fn conforms(&self, q1: &QuadraticMap, q2: &QuadraticMap) -> bool {
        (self.f_w.nrows(), self.f_w.ncols()) == (q2.m(), q1.m())
            && (self.f_v.nrows(), self.f_v.ncols()) == (q2.n(), q1.n())
    }

    fn check_shape(&self, q1: &QuadraticMap, q2: &QuadraticMap) -> Result<()> {
        if self.conforms(q1, q2) {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                what: "morphism matrix shapes".into(),
                expected: q2.m() * q1.m() + q2.n() * q1.n(),
                found: self.f_w.nrows() * self.f_w.ncols() + self.f_v.nrows() * self.f_v.ncols(),
            })
        }
    }

    /// `Q_2(f_W w) = f_V Q_1(w)` on basis vectors and on pairwise sums,
    /// which by the polar identity covers all of `W_1`.
    pub fn verify(&self, q1: &QuadraticMap, q2: &QuadraticMap) -> bool {
        if !self.conforms(q1, q2) {
            return false;
        }
        let m1 = q1.m();
        let images: Vec<BitVec> = (0..m1).map(|i| self.f_w.column(i)).collect();
        for i in 0..m1 {
            if q2.eval(&images[i]).unwrap() != self.f_v.mul_vec(q1.q_basis(i)) {
                return false;
            }
            for j in i + 1..m1 {
                let sum = &images[i] ^ &images[j];
                let w = &BitVec::unit(m1, i) ^ &BitVec::unit(m1, j);
                if q2.eval(&sum).unwrap() != self.f_v.mul_vec(&q1.eval(&w).unwrap()) {
                    return false;
                }
            }
        }
        true
    }

    /// `f_W^*(q_2) = (f_V)_*(q_1)`: substitute the linear forms
    /// `x_j ↦ Σ_i (f_W)_{ji} x_i` into `q_2` and compare with `f_V · q_1`.
    pub fn pullback_check(&self, q1: &QuadraticMap, q2: &QuadraticMap) -> bool {
        if !self.conforms(q1, q2) {
            return false;
        }
        let m1 = q1.m();
        let subs: Vec<Poly> = (0..q2.m()).map(|j| Poly::linear(self.f_w.row(j))).collect();
        let c1 = q1.extension_class();
        let c2 = q2.extension_class();
        for k in 0..q2.n() {
            let lhs = c2.components()[k].substitute(&subs);
            let mut rhs = Poly::zero(m1);
            for l in self.f_v.row(k).ones() {
                rhs += &c1.components()[l];
            }
            if lhs != rhs {
                return false;
            }
        }
        true
    }

    /// `g ∘ f`.
    pub fn compose(g: &QuadMorphism, f: &QuadMorphism) -> Result<QuadMorphism> {
        if g.f_w.ncols() != f.f_w.nrows() || g.f_v.ncols() != f.f_v.nrows() {
            return Err(Error::DimensionMismatch {
                what: "composition of morphisms".into(),
                expected: g.f_w.ncols(),
                found: f.f_w.nrows(),
            });
        }
        Ok(QuadMorphism::new(g.f_w.mul(&f.f_w), g.f_v.mul(&f.f_v)))
    }

    pub fn is_injective(&self) -> bool {
        self.f_w.rank() == self.f_w.ncols() && self.f_v.rank() == self.f_v.ncols()
    }

    /// `Q_1` restricted to `ker f_W → ker f_V`.
    pub fn kernel(&self, q1: &QuadraticMap, q2: &QuadraticMap) -> Result<Restriction> {
        self.check_shape(q1, q2)?;
        let kw = Subspace::span(q1.m(), self.f_w.kernel());
        let kv = Subspace::span(q1.n(), self.f_v.kernel());
        restrict(q1, &kw, &kv)
    }

    /// `Q_2` restricted to `Im f_W → Im f_V`.
    pub fn image(&self, q1: &QuadraticMap, q2: &QuadraticMap) -> Result<Restriction> {
        self.check_shape(q1, q2)?;
        let iw = Subspace::span(q2.m(), self.f_w.transpose().rows().iter().cloned());
        let iv = Subspace::span(q2.n(), self.f_v.transpose().rows().iter().cloned());
        restrict(q2, &iw, &iv)
    }

    /// `B_2(f_W w_1, w_2) ∈ Im f_V` for all basis vectors.
    pub fn is_normal_embedding(&self, q1: &QuadraticMap, q2: &QuadraticMap) -> Result<bool> {
        self.check_shape(q1, q2)?;
        if !self.is_injective() {
            return Err(Error::NotInjective);
        }
        let im_v = Subspace::span(q2.n(), self.f_v.transpose().rows().iter().cloned());
        for i in 0..q1.m() {
            let fw = self.f_w.column(i);
            for j in 0..q2.m() {
                let b = q2.bilinear(&fw, &BitVec::unit(q2.m(), j))?;
                if im_v.coords(&b).is_none() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `(coker f)(w + Im f_W) = Q_2(w) + Im f_V`, on the coordinates of `W_2`
    /// and `V_2` that are not pivots of the reduced image bases.
    pub fn cokernel(&self, q1: &QuadraticMap, q2: &QuadraticMap) -> Result<Quotient> {
        if !self.verify(q1, q2) {
            return Err(Error::NotMorphism);
        }
        if !self.is_normal_embedding(q1, q2)? {
            return Err(Error::NotNormalEmbedding);
        }
        let im_w = Subspace::span(q2.m(), self.f_w.transpose().rows().iter().cloned());
        let im_v = Subspace::span(q2.n(), self.f_v.transpose().rows().iter().cloned());
        let pw = projection(q2.m(), &im_w);
        let pv = projection(q2.n(), &im_v);
        let reps: Vec<usize> = complement(q2.m(), &im_w);
        let q_vals: Vec<BitVec> = reps
            .iter()
            .map(|&c| pv.mul_vec(q2.q_basis(c)))
            .collect();
        let mut pairs = Vec::new();
        for (a, &c) in reps.iter().enumerate() {
            for (b, &d) in reps.iter().enumerate().skip(a + 1) {
                pairs.push(((a, b), pv.mul_vec(q2.b(c, d))));
            }
        }
        let map = QuadraticMap::new(reps.len(), pv.nrows(), q_vals, pairs)?;
        let projection = QuadMorphism::new(pw, pv);
        if q2.m() + im_w.dim() <= COKERNEL_CHECK_CAP {
            check_well_defined(q2, &map, &projection, &im_w)?;
        }
        Ok(Quotient { map, projection })
    }
}

fn complement(width: usize, sub: &Subspace) -> Vec<usize> {
    (0..width).filter(|c| !sub.pivots.contains(c)).collect()
}

/// Matrix of `x ↦ (reduced x) restricted to the non-pivot coordinates`.
fn projection(width: usize, sub: &Subspace) -> BitMatrix {
    let reps = complement(width, sub);
    let mut e = EchelonBasis::new(width);
    for r in &sub.rows {
        e.insert(r.clone());
    }
    let cols: Vec<BitVec> = (0..width)
        .map(|j| {
            let r = e.reduce(BitVec::unit(width, j));
            let mut c = BitVec::zeros(reps.len());
            for (k, &p) in reps.iter().enumerate() {
                c.set(k, r.get(p));
            }
            c
        })
        .collect();
    BitMatrix::from_columns(&cols, reps.len())
}

fn check_well_defined(q2: &QuadraticMap, coker: &QuadraticMap, proj: &QuadMorphism, im_w: &Subspace) -> Result<()> {
    let m = q2.m();
    let d = im_w.dim();
    for w in 0u64..(1u64 << m) {
        let w = BitVec::from_u64(w, m);
        let base = proj.f_v.mul_vec(&q2.eval(&w)?);
        if coker.eval(&proj.f_w.mul_vec(&w))? != base {
            return Err(Error::NotNormalEmbedding);
        }
        for s in 1u64..(1u64 << d) {
            let mut x = w.clone();
            for k in BitVec::from_u64(s, d).ones() {
                x.xor_with(&im_w.rows[k]);
            }
            if proj.f_v.mul_vec(&q2.eval(&x)?) != base {
                return Err(Error::NotNormalEmbedding);
            }
        }
    }
    Ok(())
}
