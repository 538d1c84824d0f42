//! Bockstein-closedness: solving `β(q) = Lq`, representations `(R, T)` of
//! a quadratic map, and the bilinear `P` characterization.

use std::collections::HashMap;

use crate::gf2::{solve_linear, BitMatrix, BitVec, LinearSystem};
use crate::poly::{Monomial, Poly, PolyMatrix};
use crate::quadmap::{ExtensionClass, QuadraticMap};
use crate::{Error, Result};

/// Largest `dim W` accepted by [`check_p`].
pub const CHECK_P_CAP: usize = 12;

/// Affine space of solutions `L` (degree-1 entries) of `β(q) = Lq`.
#[derive(Clone, Debug)]
pub struct LSolution {
    pub particular: PolyMatrix,
    /// Each element `K` satisfies `Kq = 0`.
    pub kernel_basis: Vec<PolyMatrix>,
    pub unique: bool,
}

/// Coefficient matrix of `Σ_{j,k} c_{jk} x_k q_j` over degree-`deg + 2`
/// monomials, with unknowns ordered `(j, k)` as `j * m + k`.
fn linear_multiples_system(class: &ExtensionClass, factor_deg: usize) -> (BitMatrix, HashMap<Monomial, usize>) {
    let m = class.nvars();
    let n = class.len();
    let factors = Monomial::all_of_degree(m, factor_deg);
    let monos = Monomial::all_of_degree(m, factor_deg + 2);
    let index: HashMap<Monomial, usize> = monos.into_iter().enumerate().map(|(i, mo)| (mo, i)).collect();
    let mut columns = Vec::with_capacity(n * factors.len());
    for q in class.components() {
        for mu in &factors {
            let mut col = BitVec::zeros(index.len());
            for t in q.mul_monomial(mu).terms() {
                col.flip(index[t]);
            }
            columns.push(col);
        }
    }
    (BitMatrix::from_columns(&columns, index.len()), index)
}

fn poly_vector(p: &Poly, index: &HashMap<Monomial, usize>) -> BitVec {
    let mut v = BitVec::zeros(index.len());
    for t in p.terms() {
        v.flip(index[t]);
    }
    v
}

/// Row vector of unknowns `(j, k)` read back as a row of linear forms.
fn row_of_linear_forms(coeffs: &BitVec, m: usize, n: usize) -> Vec<Poly> {
    (0..n)
        .map(|j| {
            let mut p = Poly::zero(m);
            for k in 0..m {
                if coeffs.get(j * m + k) {
                    p += &Poly::var(m, k);
                }
            }
            p
        })
        .collect()
}

/// Solve `β(q) = Lq` for an `n × n` matrix `L` of linear forms.
///
/// Every row is an independent system sharing one coefficient matrix, so
/// the solution kernel is the same for every row.
pub fn solve_l(class: &ExtensionClass) -> Result<LSolution> {
    let m = class.nvars();
    let n = class.len();
    let (a, index) = linear_multiples_system(class, 1);
    let rhs: Vec<BitVec> = class
        .components()
        .iter()
        .map(|q| poly_vector(&q.bockstein(), &index))
        .collect();
    let b = BitMatrix::from_columns(&rhs, index.len());
    let sol = solve_linear(&a, &b).map_err(|e| match e {
        Error::NoSolution => Error::NotClosed,
        other => other,
    })?;
    let rows: Vec<Vec<Poly>> = (0..n)
        .map(|i| row_of_linear_forms(&sol.particular_column(i), m, n))
        .collect();
    let particular = PolyMatrix::from_rows(rows, m)?;
    let mut kernel_basis = Vec::new();
    for i in 0..n {
        for kv in &sol.kernel {
            let mut k = PolyMatrix::zeros(n, n, m);
            for (j, p) in row_of_linear_forms(kv, m, n).into_iter().enumerate() {
                k.set(i, j, p);
            }
            kernel_basis.push(k);
        }
    }
    Ok(LSolution {
        particular,
        unique: kernel_basis.is_empty(),
        kernel_basis,
    })
}

pub fn is_bockstein_closed(class: &ExtensionClass) -> bool {
    solve_l(class).is_ok()
}

/// A representation of `Q` on `U = F_2^k`: `R` is `k × k` with linear-form
/// entries, and `T(q) = Σ_j T_j q_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QModule {
    k: usize,
    r: PolyMatrix,
    t: Vec<BitMatrix>,
}

impl QModule {
    pub fn new(r: PolyMatrix, t: Vec<BitMatrix>) -> Result<Self> {
        let k = r.nrows();
        if r.ncols() != k {
            return Err(Error::DimensionMismatch {
                what: "R must be square".into(),
                expected: k,
                found: r.ncols(),
            });
        }
        if !r.is_homogeneous_of(1) {
            return Err(Error::NotQuadratic("entries of R must be linear forms".into()));
        }
        for tj in &t {
            if (tj.nrows(), tj.ncols()) != (k, k) {
                return Err(Error::DimensionMismatch {
                    what: "T_j shape".into(),
                    expected: k,
                    found: tj.nrows(),
                });
            }
        }
        Ok(Self { k, r, t })
    }

    /// `R = 0`, `T = 0`.
    pub fn trivial(k: usize, m: usize, n: usize) -> Self {
        Self {
            k,
            r: PolyMatrix::zeros(k, k, m),
            t: vec![BitMatrix::zeros(k, k); n],
        }
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn nvars(&self) -> usize {
        self.r.nvars()
    }

    pub fn r(&self) -> &PolyMatrix {
        &self.r
    }

    pub fn t(&self) -> &[BitMatrix] {
        &self.t
    }

    pub fn is_trivial(&self) -> bool {
        self.r.is_zero() && self.t.iter().all(BitMatrix::is_zero)
    }

    /// `Σ_j T_j q_j`.
    pub fn t_of_q(&self, class: &ExtensionClass) -> Result<PolyMatrix> {
        if class.len() != self.t.len() || class.nvars() != self.nvars() {
            return Err(Error::DimensionMismatch {
                what: "module and extension class".into(),
                expected: self.t.len(),
                found: class.len(),
            });
        }
        let mut out = PolyMatrix::zeros(self.k, self.k, self.nvars());
        for (tj, qj) in self.t.iter().zip(class.components()) {
            for a in 0..self.k {
                for b in tj.row(a).ones() {
                    let e = out.get(a, b) + qj;
                    out.set(a, b, e);
                }
            }
        }
        Ok(out)
    }

    /// `β(R) + R² = T(q)` exactly in the polynomial ring.
    pub fn check_representation(&self, class: &ExtensionClass) -> bool {
        let Ok(tq) = self.t_of_q(class) else {
            return false;
        };
        curvature(&self.r) == tq
    }

    /// Transposed action `R^T`, `T_j^T`: the dual module. It is again a
    /// representation since `(R^T)² = (R²)^T` for commuting entries.
    pub fn transpose(&self) -> Self {
        Self {
            k: self.k,
            r: self.r.transpose(),
            t: self.t.iter().map(BitMatrix::transpose).collect(),
        }
    }
}

/// `β(R) + R²`.
pub fn curvature(r: &PolyMatrix) -> PolyMatrix {
    r.bockstein().add(&r.mul(r).expect("square")).expect("same shape")
}

/// Find `T` with `β(R) + R² = T(q)`; fails with `NotRepresentable` if some
/// entry is outside the span of the `q_j`.
pub fn module_from_action(class: &ExtensionClass, r: &PolyMatrix) -> Result<QModule> {
    let k = r.nrows();
    let n = class.len();
    let (a, index) = linear_multiples_system(class, 0);
    let curv = curvature(r);
    if !curv.is_homogeneous_of(2) {
        return Err(Error::NotQuadratic("entries of R must be linear forms".into()));
    }
    let rhs: Vec<BitVec> = curv.entries().iter().map(|p| poly_vector(p, &index)).collect();
    let sol = solve_linear(&a, &BitMatrix::from_columns(&rhs, index.len())).map_err(|e| match e {
        Error::NoSolution => Error::NotRepresentable,
        other => other,
    })?;
    let mut t = vec![BitMatrix::zeros(k, k); n];
    for entry in 0..k * k {
        for j in sol.particular_column(entry).ones() {
            t[j].set(entry / k, entry % k, true);
        }
    }
    QModule::new(r.clone(), t)
}

/// The module on `U = V` with `R = L`.
pub fn module_from_l(class: &ExtensionClass, l: &PolyMatrix) -> Result<QModule> {
    module_from_action(class, l)
}

/// `Z` is `k × n` in the variables `z_1..z_k`, with `Z(i) e_j = T(j) e_i`
/// where `Z(i)` is the coefficient matrix of `z_i`.
pub fn z_from_t(t: &[BitMatrix], k: usize) -> PolyMatrix {
    let n = t.len();
    let mut parts = vec![BitMatrix::zeros(k, n); k];
    for (j, tj) in t.iter().enumerate() {
        for r in 0..k {
            for i in tj.row(r).ones() {
                parts[i].set(r, j, true);
            }
        }
    }
    PolyMatrix::from_linear_parts(&parts, k, n)
}

/// Inverse of [`z_from_t`].
pub fn t_from_z(z: &PolyMatrix) -> Result<Vec<BitMatrix>> {
    let k = z.nrows();
    let n = z.ncols();
    if z.nvars() != k {
        return Err(Error::DimensionMismatch {
            what: "variables of Z".into(),
            expected: k,
            found: z.nvars(),
        });
    }
    let parts = z.linear_parts()?;
    let mut t = vec![BitMatrix::zeros(k, k); n];
    for (i, part) in parts.iter().enumerate() {
        for r in 0..k {
            for j in part.row(r).ones() {
                t[j].set(r, i, true);
            }
        }
    }
    Ok(t)
}

/// `Zq = T(q)z` in `F_2[x_1..x_m, z_1..z_k]`.
pub fn adjoint_identity_holds(t: &[BitMatrix], k: usize, class: &ExtensionClass) -> bool {
    let m = class.nvars();
    let total = m + k;
    let q: Vec<Poly> = class.components().iter().map(|p| p.embed(total, 0)).collect();
    let zs: Vec<Poly> = (0..k).map(|i| Poly::var(total, m + i)).collect();
    let z = z_from_t(t, k);
    let z_big: Vec<Vec<Poly>> = (0..k).map(|r| z.row(r).iter().map(|p| p.embed(total, m)).collect()).collect();
    let Ok(z_big) = PolyMatrix::from_rows(z_big, total) else {
        return false;
    };
    let module = QModule {
        k,
        r: PolyMatrix::zeros(k, k, m),
        t: t.to_vec(),
    };
    let Ok(tq) = module.t_of_q(class) else {
        return false;
    };
    let tq_big: Vec<Vec<Poly>> = (0..k).map(|r| tq.row(r).iter().map(|p| p.embed(total, 0)).collect()).collect();
    let tq_big = PolyMatrix::from_rows(tq_big, total).unwrap();
    z_big.apply(&q).ok() == tq_big.apply(&zs).ok()
}

/// A bilinear map `P: V × W → V`, stored as `P(v_a, w_b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearP {
    n: usize,
    m: usize,
    values: Vec<BitVec>,
}

impl BilinearP {
    pub fn value(&self, a: usize, b: usize) -> &BitVec {
        &self.values[a * self.m + b]
    }

    pub fn apply(&self, v: &BitVec, w: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.n);
        for a in v.ones() {
            for b in w.ones() {
                out.xor_with(self.value(a, b));
            }
        }
        out
    }

    /// `P(Q(w), w') = B(w, w') + P(B(w, w'), w)` at one pair of points.
    pub fn holds_at(&self, q: &QuadraticMap, w: &BitVec, w2: &BitVec) -> bool {
        let b = q.bilinear(w, w2).unwrap();
        let lhs = self.apply(&q.eval(w).unwrap(), w2);
        lhs == &b ^ &self.apply(&b, w)
    }
}

/// Some bilinear `P` with `P(Q(w), w') = B(w, w') + P(B(w, w'), w)` for all
/// `w, w'`, or `None`.
///
/// Every point `w ∈ W` is enumerated. Both sides are linear in `w'`, so
/// basis vectors suffice for `w'`.
pub fn check_p(q: &QuadraticMap) -> Result<Option<BilinearP>> {
    let (m, n) = (q.m(), q.n());
    if m > CHECK_P_CAP {
        return Err(Error::CapExceeded {
            what: "dim W for the P test".into(),
            limit: CHECK_P_CAP,
            requested: m,
        });
    }
    // unknown (a, b) at index a * m + b; one right-hand side per coordinate
    let mut sys = LinearSystem::new(n * m, n);
    let mut failed = false;
    q.try_for_each_value(|w, qw| {
        let w = BitVec::from_u64(w, m);
        for j in 0..m {
            let e = BitVec::unit(m, j);
            let b = q.bilinear(&w, &e).unwrap();
            let mut row = BitVec::zeros(n * m);
            for a in qw.ones() {
                row.flip(a * m + j);
            }
            for a in b.ones() {
                for i in w.ones() {
                    row.flip(a * m + i);
                }
            }
            sys.push_equation(&row, &b);
        }
        if !sys.is_consistent() {
            failed = true;
            return false;
        }
        true
    })?;
    if failed {
        return Ok(None);
    }
    let sol = match sys.solve() {
        Ok(s) => s,
        Err(Error::NoSolution) => return Ok(None),
        Err(e) => return Err(e),
    };
    let values = (0..n * m)
        .map(|u| BitVec::from_bools(&(0..n).map(|c| sol.particular.get(u, c)).collect::<Vec<_>>()))
        .collect();
    Ok(Some(BilinearP { n, m, values }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_column;
    use crate::quadmap::examples;

    fn u3_l() -> PolyMatrix {
        let rows = [["0", "0", "0"], ["x3", "0", "x1"], ["0", "0", "0"]];
        PolyMatrix::from_rows(rows.iter().map(|r| parse_column(r, 3).unwrap()).collect(), 3).unwrap()
    }

    #[test]
    fn u3_l_is_unique() {
        let sol = solve_l(&examples::u3().extension_class()).unwrap();
        assert!(sol.unique);
        assert_eq!(sol.particular, u3_l());
    }

    #[test]
    fn z4_l_is_zero_and_unique() {
        let sol = solve_l(&examples::z4().extension_class()).unwrap();
        assert!(sol.unique);
        assert!(sol.particular.is_zero());
    }

    #[test]
    fn non_closed_rejected() {
        let c = examples::non_closed().extension_class();
        assert!(matches!(solve_l(&c), Err(Error::NotClosed)));
        assert!(check_p(&examples::non_closed()).unwrap().is_none());
    }

    #[test]
    fn kernel_elements_annihilate_q() {
        let c = ExtensionClass::new(parse_column(&["x1^2", "x1*x2"], 2).unwrap(), 2).unwrap();
        let sol = solve_l(&c).unwrap();
        assert!(!sol.unique);
        for k in &sol.kernel_basis {
            assert!(k.apply(c.components()).unwrap().iter().all(Poly::is_zero));
        }
        let lq = sol.particular.apply(c.components()).unwrap();
        let bq: Vec<Poly> = c.components().iter().map(Poly::bockstein).collect();
        assert_eq!(lq, bq);
    }

    #[test]
    fn u3_module() {
        let c = examples::u3().extension_class();
        let module = module_from_l(&c, &u3_l()).unwrap();
        assert!(module.check_representation(&c));
        let mut e23 = BitMatrix::zeros(3, 3);
        e23.set(1, 2, true);
        let mut e21 = BitMatrix::zeros(3, 3);
        e21.set(1, 0, true);
        assert_eq!(module.t(), &[e23, BitMatrix::zeros(3, 3), e21]);
        let curv = curvature(&u3_l());
        assert_eq!(curv.to_strings()[1], vec!["x3^2", "0", "x1^2"]);
        assert!(module.transpose().check_representation(&c));
    }

    #[test]
    fn trivial_and_failing_modules() {
        let c = examples::z4().extension_class();
        assert!(QModule::trivial(2, 1, 1).check_representation(&c));
        let bad = QModule::new(PolyMatrix::zeros(1, 1, 1), vec![BitMatrix::identity(1)]).unwrap();
        assert!(!bad.check_representation(&c));
    }

    #[test]
    fn not_representable() {
        // x2^2 is not a multiple of x1^2
        let c = ExtensionClass::new(parse_column(&["x1^2"], 2).unwrap(), 2).unwrap();
        let rows = vec![parse_column(&["0", "x2"], 2).unwrap(), parse_column(&["0", "0"], 2).unwrap()];
        let r = PolyMatrix::from_rows(rows, 2).unwrap();
        assert!(matches!(module_from_action(&c, &r), Err(Error::NotRepresentable)));
    }

    #[test]
    fn adjoint_round_trip() {
        assert!(z_from_t(&[BitMatrix::zeros(2, 2)], 2).is_zero());
        let z = z_from_t(&[BitMatrix::identity(1)], 1);
        assert_eq!(z.to_strings(), vec![vec!["x1"]]);
        let c = examples::u3().extension_class();
        let t = module_from_l(&c, &u3_l()).unwrap().t().to_vec();
        let z = z_from_t(&t, 3);
        assert_eq!(t_from_z(&z).unwrap(), t);
        assert!(adjoint_identity_holds(&t, 3, &c));
    }

    #[test]
    fn p_examples() {
        let u3 = examples::u3();
        let p = check_p(&u3).unwrap().expect("u3 is closed");
        for w in 0..8 {
            for w2 in 0..8 {
                assert!(p.holds_at(&u3, &BitVec::from_u64(w, 3), &BitVec::from_u64(w2, 3)));
            }
        }
        let zero = QuadraticMap::zero(2, 2);
        let p = check_p(&zero).unwrap().unwrap();
        assert!(p.values.iter().all(BitVec::is_zero));
    }
}
