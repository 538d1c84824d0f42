use quadcoh::bockstein::{check_p, module_from_l, solve_l, QModule};
use quadcoh::cohomology::{bockstein_invariants, Complex};
use quadcoh::group::{build_group, verify_structure};
use quadcoh::ideal::QuotientAlgebra;
use quadcoh::poly::{Poly, PolyMatrix};
use quadcoh::quadmap::{examples, family, FamilyKind, QuadraticMap};
use quadcoh::resolution::{poincare_check, ResolutionCaps};
use quadcoh::spectral::{b2_decomposition, B1Model};
use quadcoh::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::Outcome;

fn corpus() -> Vec<(&'static str, QuadraticMap)> {
    vec![
        ("z4", examples::z4()),
        ("z4^2", examples::z4_power(2)),
        ("z4^3", examples::z4_power(3)),
        ("u3", examples::u3()),
        ("gl2", family(FamilyKind::Gl, 2).expect("gl(2)")),
    ]
}

fn u3_l() -> Result<bool> {
    let sol = solve_l(&examples::u3().extension_class())?;
    let rows = sol.particular.to_strings();
    Ok(sol.unique
        && rows[0] == ["0", "0", "0"]
        && rows[1] == ["x3", "0", "x1"]
        && rows[2] == ["0", "0", "0"])
}

fn p_iff_l(rng: &mut ChaCha8Rng, instances: usize) -> Result<bool> {
    for m in 0..=2 {
        for n in 0..=2 {
            for code in 0..QuadraticMap::code_count(m, n) {
                let q = QuadraticMap::from_code(m, n, code);
                if check_p(&q)?.is_some() != solve_l(&q.extension_class()).is_ok() {
                    return Ok(false);
                }
            }
        }
    }
    for _ in 0..instances {
        let q = QuadraticMap::random(3, 3, rng);
        if check_p(&q)?.is_some() != solve_l(&q.extension_class()).is_ok() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn beta_squared(rng: &mut ChaCha8Rng, instances: usize) -> bool {
    (0..instances).all(|_| {
        let nvars = rng.gen_range(1..=4);
        let d = rng.gen_range(0..=4);
        Poly::random_homogeneous(nvars, d, rng).bockstein().bockstein().is_zero()
    })
}

fn delta_squared(rng: &mut ChaCha8Rng, instances: usize) -> Result<bool> {
    for (_, q) in corpus() {
        let class = q.extension_class();
        let a = QuotientAlgebra::new(&class, 6)?;
        let l = solve_l(&class)?.particular;
        let modules = [QModule::trivial(1, q.m(), q.n()), module_from_l(&class, &l)?];
        for module in &modules {
            let c = Complex::new(&a, module)?;
            for _ in 0..instances / 10 + 1 {
                let p = rng.gen_range(0..=3);
                let entries = (0..module.dim())
                    .map(|_| Poly::random_homogeneous(q.m(), p, rng))
                    .collect();
                let f = c.cochain(p, entries)?;
                if !c.differential(&c.differential(&f)?)?.is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn groups() -> Result<bool> {
    for (_, q) in corpus() {
        if !verify_structure(&build_group(&q)?, &q)?.passed() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn poincare() -> Result<bool> {
    for q in [examples::z4(), examples::z4_power(2), examples::u3()] {
        if !poincare_check(&q, 3, ResolutionCaps::default())?.matches {
            return Ok(false);
        }
    }
    Ok(true)
}

fn b2_agreement() -> Result<bool> {
    for (_, q) in corpus() {
        let class = q.extension_class();
        let a = QuotientAlgebra::new(&class, 9)?;
        let l = solve_l(&class)?.particular;
        let eta = vec![Poly::zero(q.m()); q.n()];
        let direct = B1Model::new(&a, &l, &eta, 8)?.b2_direct()?;
        if direct.dims != b2_decomposition(&a, &l, &eta, 8)?.dims {
            return Ok(false);
        }
    }
    Ok(true)
}

fn h1_invariants() -> Result<bool> {
    for (_, q) in corpus() {
        let class = q.extension_class();
        let a = QuotientAlgebra::new(&class, 4)?;
        let c = Complex::new(&a, &QModule::trivial(1, q.m(), q.n()))?;
        if c.cohomology_dim(1)? != bockstein_invariants(&class).len() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn negative_control() -> Result<bool> {
    let q = examples::non_closed();
    Ok(check_p(&q)?.is_none() && solve_l(&q.extension_class()).is_err())
}

fn lattice() -> Result<bool> {
    let class = examples::u3().extension_class();
    let l: PolyMatrix = solve_l(&class)?.particular;
    Ok(quadcoh::group::lattice_m(&l)?.multiplicativity_failure().is_none())
}

pub fn run(seed: u64, instances: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let results: Vec<(&str, Result<bool>)> = vec![
        ("u3 L", u3_l()),
        ("P iff L", p_iff_l(&mut rng, instances)),
        ("beta^2 = 0", Ok(beta_squared(&mut rng, instances))),
        ("delta^2 = 0", delta_squared(&mut rng, instances)),
        ("group structure", groups()),
        ("poincare series", poincare()),
        ("B2 direct = decomposition", b2_agreement()),
        ("H1 = Z(Q)^beta", h1_invariants()),
        ("lattice multiplicative", lattice()),
        ("non-closed control", negative_control()),
    ];
    let checks: Vec<_> = results
        .iter()
        .map(|(name, r)| match r {
            Ok(passed) => json!({ "name": name, "passed": passed }),
            Err(e) => json!({ "name": name, "passed": false, "error": e.to_string() }),
        })
        .collect();
    let failed: Vec<&str> = results
        .iter()
        .filter(|(_, r)| !matches!(r, Ok(true)))
        .map(|(name, _)| *name)
        .collect();
    Outcome {
        report: json!({ "seed": seed, "instances": instances, "checks": checks, "passed": failed.is_empty() }),
        summary: if failed.is_empty() {
            format!("selftest: {} checks pass", results.len())
        } else {
            format!("selftest: failed {}", failed.join(", "))
        },
        negative: !failed.is_empty(),
    }
}
