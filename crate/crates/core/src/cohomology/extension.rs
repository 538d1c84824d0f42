//! Extensions `0 → U → Q̃ → Q → 0` with abelian kernel and their factor
//! sets.
//!
//! Coordinates are fixed as follows: `W̃ = W ⊕ U` with variables
//! `x_1..x_m, z_1..z_k`, and `Ṽ = V ⊕ U`. The extension class of `Q̃` is
//! the column `(q, β(z) + Rz + f)`.

use std::collections::HashMap;

use super::{Cochain, Complex};
use crate::bockstein::{module_from_action, solve_l, QModule};
use crate::gf2::{solve_linear, BitMatrix, BitVec, LinearSystem};
use crate::ideal::QuotientAlgebra;
use crate::poly::{Monomial, Poly, PolyMatrix};
use crate::quadmap::{QuadMorphism, QuadraticMap};
use crate::{Error, Result};

/// Largest `dim H^1` for which all sections are listed.
pub const SPLITTING_CAP: usize = 16;

/// `Q̃` with the inclusion of the identity map on `U` and the projection
/// onto `Q`.
#[derive(Clone, Debug)]
pub struct Extension {
    pub tilde: QuadraticMap,
    pub inclusion: QuadMorphism,
    pub projection: QuadMorphism,
}

/// `f_2 + f_1 = δ(a) + b q`: `a` is `k × m` (linear `W → U`), `b` is
/// `k × n` (linear `V → U`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equivalence {
    pub a: BitMatrix,
    pub b: BitMatrix,
}

/// The identity quadratic map `U → U`, `u ↦ u`.
pub fn identity_map(k: usize) -> QuadraticMap {
    QuadraticMap::new(k, k, (0..k).map(|i| BitVec::unit(k, i)).collect(), []).unwrap()
}

fn standard_maps(m: usize, n: usize, k: usize) -> (QuadMorphism, QuadMorphism) {
    let mut inc_w = BitMatrix::zeros(m + k, k);
    let mut inc_v = BitMatrix::zeros(n + k, k);
    for r in 0..k {
        inc_w.set(m + r, r, true);
        inc_v.set(n + r, r, true);
    }
    let mut proj_w = BitMatrix::zeros(m, m + k);
    for i in 0..m {
        proj_w.set(i, i, true);
    }
    let mut proj_v = BitMatrix::zeros(n, n + k);
    for j in 0..n {
        proj_v.set(j, j, true);
    }
    (QuadMorphism::new(inc_w, inc_v), QuadMorphism::new(proj_w, proj_v))
}

/// Build `Q̃` from any degree-2 representative `f` (not necessarily in
/// normal form). Fails with `NotCocycle` when `Q̃` is not Bockstein closed,
/// which happens exactly when `δ(f) ≠ 0`.
pub fn cocycle_to_extension_raw(q: &QuadraticMap, module: &QModule, f: &[Poly]) -> Result<Extension> {
    let (m, n, k) = (q.m(), q.n(), module.dim());
    if f.len() != k {
        return Err(Error::DimensionMismatch {
            what: "factor set entries".into(),
            expected: k,
            found: f.len(),
        });
    }
    let total = m + k;
    let mut column: Vec<Poly> = q.extension_class().components().iter().map(|p| p.embed(total, 0)).collect();
    let z: Vec<Poly> = (0..k).map(|r| Poly::var(total, m + r)).collect();
    for r in 0..k {
        let mut e = z[r].bockstein();
        for s in 0..k {
            let rs = module.r().get(r, s);
            if !rs.is_zero() {
                e += &(&rs.embed(total, 0) * &z[s]);
            }
        }
        e += &f[r].embed(total, 0);
        column.push(e);
    }
    let tilde = QuadraticMap::from_polys(&column, total)?;
    if solve_l(&tilde.extension_class()).is_err() {
        return Err(Error::NotCocycle);
    }
    let (inclusion, projection) = standard_maps(m, n, k);
    Ok(Extension {
        tilde,
        inclusion,
        projection,
    })
}

/// `Q̃(w, u) = (Q(w), u + ρ_W(w)u + f(w))` for a degree-2 cochain `f`.
pub fn cocycle_to_extension(complex: &Complex<'_>, f: &Cochain) -> Result<Extension> {
    if f.degree() != 2 {
        return Err(Error::DimensionMismatch {
            what: "factor set degree".into(),
            expected: 2,
            found: f.degree(),
        });
    }
    if !complex.is_cocycle(f)? {
        return Err(Error::NotCocycle);
    }
    let q = QuadraticMap::from_class(complex.algebra().class());
    cocycle_to_extension_raw(&q, complex.module(), f.entries())
}

/// Recover `(ρ_W, ρ_V)` and the factor set from an extension, using the
/// sections given by the pivot columns of `π_W` and `π_V`. The factor set
/// is returned in normal form over `algebra`.
pub fn extension_to_cocycle(q: &QuadraticMap, ext: &Extension, algebra: &QuotientAlgebra) -> Result<(QModule, Cochain)> {
    let k = ext.inclusion.f_w.ncols();
    let (m, n) = (q.m(), q.n());
    let tilde = &ext.tilde;
    let fail = |msg: &str| Err(Error::NotExtension(msg.into()));
    if tilde.m() != m + k || tilde.n() != n + k {
        return fail("dimensions are not additive");
    }
    if !ext.inclusion.verify(&identity_map(k), tilde) {
        return fail("inclusion is not a morphism from the identity map on U");
    }
    if !ext.projection.verify(tilde, q) {
        return fail("projection is not a morphism onto Q");
    }
    if !ext.inclusion.is_injective() {
        return fail("inclusion is not injective");
    }
    let (pw, pv) = (&ext.projection.f_w, &ext.projection.f_v);
    if pw.rank() != m || pv.rank() != n {
        return fail("projection is not surjective");
    }
    if !pw.mul(&ext.inclusion.f_w).is_zero() || !pv.mul(&ext.inclusion.f_v).is_zero() {
        return fail("image of the inclusion is not in the kernel of the projection");
    }
    let sigma_w = section(pw)?;
    let sigma_v = section(pv)?;
    // u-coordinates of a vector in i_V(U), after removing σ_V π_V
    let to_u = |v: &BitVec| -> Result<BitVec> {
        let mut v = v.clone();
        v.xor_with(&sigma_v.mul_vec(&pv.mul_vec(&v)));
        let sol = solve_linear(&ext.inclusion.f_v, &BitMatrix::from_columns(&[v], n + k))
            .map_err(|_| Error::NotExtension("value outside U".into()))?;
        Ok(sol.particular_column(0))
    };
    // R[r][s] = Σ_i ρ_W(w_i)[r][s] x_i with ρ_W(w)u = B̃(i_W u, σ_W w)
    let mut parts = vec![BitMatrix::zeros(k, k); m];
    for (i, part) in parts.iter_mut().enumerate() {
        let sw = sigma_w.column(i);
        for s in 0..k {
            let b = tilde.bilinear(&ext.inclusion.f_w.column(s), &sw)?;
            for r in to_u(&b)?.ones() {
                part.set(r, s, true);
            }
        }
    }
    let r = PolyMatrix::from_linear_parts(&parts, k, k);
    let module = module_from_action(algebra.class(), &r).map_err(|e| match e {
        Error::NotRepresentable => Error::NotRepresentation,
        other => other,
    })?;
    // f(w) = U-component of Q̃(σ_W w), as a quadratic map W → U
    let q_vals = (0..m)
        .map(|i| to_u(&tilde.eval(&sigma_w.column(i))?))
        .collect::<Result<Vec<_>>>()?;
    let mut pairs = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let b = tilde.bilinear(&sigma_w.column(i), &sigma_w.column(j))?;
            pairs.push(((i, j), to_u(&b)?));
        }
    }
    let f_map = QuadraticMap::new(m, k, q_vals, pairs)?;
    let complex = Complex::new(algebra, &module)?;
    let f = complex.cochain(2, f_map.extension_class().components().to_vec())?;
    Ok((module, f))
}

/// A right inverse of a surjective matrix: each basis vector is sent to
/// the canonical particular solution.
fn section(p: &BitMatrix) -> Result<BitMatrix> {
    let sol = solve_linear(p, &BitMatrix::identity(p.nrows()))?;
    Ok(sol.particular)
}

/// Coefficient vector of a degree-2 polynomial over the monomial index.
fn quadric_vector(f: &Poly, index: &HashMap<Monomial, usize>) -> BitVec {
    let mut v = BitVec::zeros(index.len());
    for t in f.terms() {
        v.flip(index[t]);
    }
    v
}

/// Solve `f_1 + f_2 = β(a) + R a + b q` exactly in degree 2, for a linear
/// `a: W → U` and `b: V → U`.
pub fn extensions_equivalent(complex: &Complex<'_>, f1: &Cochain, f2: &Cochain) -> Result<Option<Equivalence>> {
    let module = complex.module();
    let class = complex.algebra().class();
    let (m, n, k) = (class.nvars(), class.len(), module.dim());
    let monos = Monomial::all_of_degree(m, 2);
    let index: HashMap<Monomial, usize> = monos.iter().cloned().enumerate().map(|(i, mo)| (mo, i)).collect();
    let width = monos.len();
    // unknown a[r][i] at r * m + i, b[r][j] at k * m + r * n + j;
    // equation (s, monomial) at s * width + monomial
    let unknowns = k * m + k * n;
    let mut columns = vec![BitVec::zeros(k * width); unknowns];
    for r in 0..k {
        for i in 0..m {
            let col = &mut columns[r * m + i];
            let xi = Poly::var(m, i);
            // β(a)_r picks up x_i²
            for t in quadric_vector(&xi.bockstein(), &index).ones() {
                col.flip(r * width + t);
            }
            // (R a)_s = Σ_r R[s][r] a_r
            for s in 0..k {
                let rs = module.r().get(s, r);
                if !rs.is_zero() {
                    for t in quadric_vector(&(rs * &xi), &index).ones() {
                        col.flip(s * width + t);
                    }
                }
            }
        }
        for j in 0..n {
            let col = &mut columns[k * m + r * n + j];
            for t in quadric_vector(&class.components()[j], &index).ones() {
                col.flip(r * width + t);
            }
        }
    }
    let mut rhs = BitVec::zeros(k * width);
    for (r, (a, b)) in f1.entries().iter().zip(f2.entries()).enumerate() {
        for t in quadric_vector(&(a + b), &index).ones() {
            rhs.flip(r * width + t);
        }
    }
    let mut sys = LinearSystem::new(unknowns, 1);
    let mat = BitMatrix::from_columns(&columns, k * width);
    for (row, &b) in mat.rows().iter().zip(rhs.to_bools().iter()) {
        sys.push_equation(row, &BitVec::from_bools(&[b]));
    }
    let sol = match sys.solve() {
        Ok(s) => s,
        Err(Error::NoSolution) => return Ok(None),
        Err(e) => return Err(e),
    };
    let x = sol.particular_column(0);
    let mut a = BitMatrix::zeros(k, m);
    let mut b = BitMatrix::zeros(k, n);
    for u in x.ones() {
        if u < k * m {
            a.set(u / m, u % m, true);
        } else {
            let u = u - k * m;
            b.set(u / n, u % n, true);
        }
    }
    Ok(Some(Equivalence { a, b }))
}

/// Sections of the split extension `Q̃ = Q ⋉ U` (factor set zero), one
/// for each class in `H^1(Q, U)`: `s_W(w) = (w, d_W(w))`,
/// `s_V(v) = (v, d_V(v))` with `(1 + ρ_W(w)) d_W(w) + d_V(Q(w)) = 0`.
pub fn splittings(complex: &Complex<'_>) -> Result<Vec<QuadMorphism>> {
    let class = complex.algebra().class();
    let module = complex.module();
    let (m, n, k) = (class.nvars(), class.len(), module.dim());
    let q = QuadraticMap::from_class(class);
    let split = cocycle_to_extension_raw(&q, module, &vec![Poly::zero(m); k])?;
    let h1 = complex.cohomology(1)?;
    if h1.dim > SPLITTING_CAP {
        return Err(Error::CapExceeded {
            what: "dim H^1 for listing splittings".into(),
            limit: SPLITTING_CAP,
            requested: h1.dim,
        });
    }
    let quad_index: HashMap<Monomial, usize> =
        Monomial::all_of_degree(m, 2).into_iter().enumerate().map(|(i, mo)| (mo, i)).collect();
    let q_columns: Vec<BitVec> = class.components().iter().map(|p| quadric_vector(p, &quad_index)).collect();
    let q_matrix = BitMatrix::from_columns(&q_columns, quad_index.len());
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << h1.dim) {
        let mut d = vec![Poly::zero(m); k];
        for (bit, rep) in h1.representatives.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                for (e, r) in d.iter_mut().zip(rep.entries()) {
                    *e += r;
                }
            }
        }
        // β(d) + R d is a combination of the q_j, read off as d_V
        let rd = module.r().apply(&d)?;
        let targets: Vec<BitVec> = d
            .iter()
            .zip(&rd)
            .map(|(di, ri)| quadric_vector(&(&di.bockstein() + ri), &quad_index))
            .collect();
        let sol = solve_linear(&q_matrix, &BitMatrix::from_columns(&targets, quad_index.len()))
            .map_err(|_| Error::Internal("H^1 representative is not a derivation".into()))?;
        let mut s_w = BitMatrix::zeros(m + k, m);
        for i in 0..m {
            s_w.set(i, i, true);
        }
        for (r, dr) in d.iter().enumerate() {
            for t in dr.terms() {
                let i = t.exponents().iter().position(|&e| e == 1).unwrap();
                s_w.set(m + r, i, true);
            }
        }
        let mut s_v = BitMatrix::zeros(n + k, n);
        for j in 0..n {
            s_v.set(j, j, true);
        }
        for r in 0..k {
            for j in sol.particular_column(r).ones() {
                s_v.set(n + r, j, true);
            }
        }
        let s = QuadMorphism::new(s_w, s_v);
        let back = QuadMorphism::compose(&split.projection, &s)?;
        if !s.verify(&q, &split.tilde) || back != QuadMorphism::identity(&q) {
            return Err(Error::Internal("constructed section failed verification".into()));
        }
        out.push(s);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bockstein::module_from_l;
    use crate::cohomology::parse_cochain;
    use crate::poly::parse_column;
    use crate::quadmap::examples;

    #[test]
    fn zero_cocycle_gives_direct_sum() {
        let q = examples::u3();
        let a = QuotientAlgebra::new(&q.extension_class(), 6).unwrap();
        let triv = QModule::trivial(1, 3, 3);
        let c = Complex::new(&a, &triv).unwrap();
        let ext = cocycle_to_extension(&c, &c.zero_cochain(2)).unwrap();
        assert_eq!(
            ext.tilde.extension_class().to_strings(),
            vec!["x1^2", "x1*x3 + x2^2", "x3^2", "x4^2"]
        );
        let (module, f) = extension_to_cocycle(&q, &ext, &a).unwrap();
        assert!(module.is_trivial());
        assert!(f.is_zero());
    }

    #[test]
    fn semidirect_sum_is_closed() {
        let q = examples::u3();
        let class = q.extension_class();
        let a = QuotientAlgebra::new(&class, 6).unwrap();
        let lm = module_from_l(&class, &solve_l(&class).unwrap().particular).unwrap();
        let c = Complex::new(&a, &lm).unwrap();
        let ext = cocycle_to_extension(&c, &c.zero_cochain(2)).unwrap();
        assert_eq!(ext.tilde.m(), 6);
        assert!(solve_l(&ext.tilde.extension_class()).is_ok());
        let (module, f) = extension_to_cocycle(&q, &ext, &a).unwrap();
        assert_eq!(module, lm);
        assert!(f.is_zero());
    }

    #[test]
    fn z4_factor_set_round_trip() {
        let q = examples::z4();
        let a = QuotientAlgebra::new(&q.extension_class(), 4).unwrap();
        let triv = QModule::trivial(1, 1, 1);
        let f = parse_column(&["x1^2"], 1).unwrap();
        let ext = cocycle_to_extension_raw(&q, &triv, &f).unwrap();
        assert_eq!(ext.tilde.extension_class().to_strings(), vec!["x1^2", "x1^2 + x2^2"]);
        let (module, g) = extension_to_cocycle(&q, &ext, &a).unwrap();
        assert!(module.is_trivial());
        let c = Complex::new(&a, &module).unwrap();
        // x1^2 is zero in A*(Q), so the recovered cocycle is cohomologous to it
        assert!(g.is_zero());
        assert!(extensions_equivalent(&c, &g, &c.zero_cochain(2)).unwrap().is_some());
    }

    #[test]
    fn non_cocycle_rejected() {
        let q = examples::u3();
        let class = q.extension_class();
        let a = QuotientAlgebra::new(&class, 6).unwrap();
        let lm = module_from_l(&class, &solve_l(&class).unwrap().particular).unwrap();
        let c = Complex::new(&a, &lm).unwrap();
        let mut rejected = 0;
        for v in 0..c.cochain_dim(2).unwrap() {
            let f = c.from_coords(2, &BitVec::unit(c.cochain_dim(2).unwrap(), v)).unwrap();
            let raw = cocycle_to_extension_raw(&q, &lm, f.entries());
            if c.is_cocycle(&f).unwrap() {
                assert!(raw.is_ok());
            } else {
                assert!(matches!(raw, Err(Error::NotCocycle)));
                assert!(matches!(cocycle_to_extension(&c, &f), Err(Error::NotCocycle)));
                rejected += 1;
            }
        }
        assert!(rejected > 0);
    }

    #[test]
    fn equivalence_examples() {
        let class = examples::u3().extension_class();
        let a = QuotientAlgebra::new(&class, 6).unwrap();
        let c = Complex::new(&a, &QModule::trivial(1, 3, 3)).unwrap();
        let h2 = c.cohomology(2).unwrap();
        assert!(h2.dim > 0);
        for f in &h2.representatives {
            let e = extensions_equivalent(&c, f, f).unwrap().unwrap();
            assert!(e.a.is_zero() && e.b.is_zero());
            assert!(extensions_equivalent(&c, f, &c.zero_cochain(2)).unwrap().is_none());
        }
        let x2 = parse_cochain(&c, 1, &["x2"]).unwrap();
        let f = &h2.representatives[0];
        let shifted = c.cochain(2, vec![&f.entries()[0] + &c.differential(&x2).unwrap().entries()[0]]).unwrap();
        assert!(extensions_equivalent(&c, f, &shifted).unwrap().is_some());
    }

    #[test]
    fn splitting_counts() {
        let z4 = examples::z4();
        let a = QuotientAlgebra::new(&z4.extension_class(), 4).unwrap();
        let c = Complex::new(&a, &QModule::trivial(1, 1, 1)).unwrap();
        assert_eq!(splittings(&c).unwrap().len(), 2);
        let u3 = examples::u3();
        let a = QuotientAlgebra::new(&u3.extension_class(), 6).unwrap();
        let c = Complex::new(&a, &QModule::trivial(1, 3, 3)).unwrap();
        assert_eq!(splittings(&c).unwrap().len(), 4);
    }
}
