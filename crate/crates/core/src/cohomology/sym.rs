use std::collections::HashMap;

use crate::bockstein::{module_from_action, QModule};
use crate::gf2::BitMatrix;
use crate::poly::{Monomial, PolyMatrix};
use crate::quadmap::ExtensionClass;
use crate::Result;

/// `Sym^i` of a module `M` on `F_2^k`, with basis the degree-`i`
/// monomials in `s_1..s_k` (descending graded-lex).
///
/// The action is the Leibniz extension of the derivation
/// `D(s_j) = Σ_l R[l][j] s_l`, so that `Sym^1(M) = M`. The matrix `T` is
/// recovered from `β(R) + R² = T(q)`.
pub fn sym_power_module(class: &ExtensionClass, module: &QModule, i: usize) -> Result<QModule> {
    let m = class.nvars();
    let k = module.dim();
    let basis = Monomial::all_of_degree(k, i);
    let index: HashMap<&Monomial, usize> = basis.iter().enumerate().map(|(a, mo)| (mo, a)).collect();
    let parts = module.r().linear_parts()?;
    let dim = basis.len();
    let mut sym_parts = vec![BitMatrix::zeros(dim, dim); m];
    for (col, alpha) in basis.iter().enumerate() {
        for j in 0..k {
            // α_j s^{α - e_j} D(s_j), nonzero only for odd α_j
            if alpha.exponent(j) % 2 == 0 {
                continue;
            }
            let rest = alpha.div_var(j).expect("positive exponent");
            for l in 0..k {
                let row = index[&rest.times_var(l)];
                for (x, part) in parts.iter().enumerate() {
                    if part.get(l, j) {
                        let cur = sym_parts[x].get(row, col);
                        sym_parts[x].set(row, col, !cur);
                    }
                }
            }
        }
    }
    let r = PolyMatrix::from_linear_parts(&sym_parts, dim, dim);
    module_from_action(class, &r)
}
