use std::path::Path;

use quadcoh::bockstein::{module_from_action, module_from_l, solve_l as solve, QModule};
use quadcoh::cohomology::{sym_power_module, Complex, Obstruction};
use quadcoh::gf2::BitMatrix;
use quadcoh::group::{build_group_with_cap, lattice_m, realize_morphism, two_rank, verify_structure};
use quadcoh::ideal::{is_regular_sequence, QuotientAlgebra};
use quadcoh::poly::{parse_column, Poly, PolyMatrix};
use quadcoh::quadmap::{family as build_family, FamilyKind, QuadMorphism, QuadraticMap};
use quadcoh::resolution::{poincare_check, ResolutionCaps};
use quadcoh::spectral::{b2_decomposition, torsion_report, B1Model, SpectralReport};
use quadcoh::Error;
use serde_json::{json, Value};

use crate::{Failure, GlobalOpts, Outcome};

fn ok(report: Value, summary: impl Into<String>) -> Result<Outcome, Failure> {
    Ok(Outcome {
        report,
        summary: summary.into(),
        negative: false,
    })
}

fn negative(report: Value, summary: impl Into<String>) -> Result<Outcome, Failure> {
    Ok(Outcome {
        report,
        summary: summary.into(),
        negative: true,
    })
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn strings(value: &Value, what: &str) -> Result<Vec<String>, Failure> {
    value
        .as_array()
        .ok_or_else(|| Failure::Usage(format!("{what} must be a list")))?
        .iter()
        .map(|v| {
            v.as_str()
                .map(str::to_string)
                .ok_or_else(|| Failure::Usage(format!("{what} entries must be strings")))
        })
        .collect()
}

fn bit_matrix(value: &Value, what: &str) -> Result<BitMatrix, Failure> {
    let rows: Vec<Vec<u8>> = serde_json::from_value(value.clone())
        .map_err(|e| Failure::Usage(format!("{what} must be a list of 0/1 rows: {e}")))?;
    if rows.iter().flatten().any(|&b| b > 1) {
        return Err(Failure::Usage(format!("{what} has entries other than 0 and 1")));
    }
    Ok(BitMatrix::from_bits(&rows))
}

pub fn family(kind: FamilyKind, size: usize) -> Result<Outcome, Failure> {
    let q = build_family(kind, size)?;
    let report: Value = serde_json::from_str(&q.to_json()).expect("valid JSON");
    ok(report, format!("{kind}({size}): m = {}, n = {}", q.m(), q.n()))
}

pub fn check(q: &QuadraticMap) -> Result<Outcome, Failure> {
    let class = q.extension_class();
    if solve(&class).is_err() {
        return negative(json!({ "bockstein_closed": false }), "not Bockstein closed");
    }
    let exact = q.is_two_power_exact()?;
    let regular = is_regular_sequence(&class)?;
    ok(
        json!({ "bockstein_closed": true, "two_power_exact": exact, "regular": regular }),
        format!("Bockstein closed; 2-power exact: {exact}; regular: {regular}"),
    )
}

pub fn solve_l(q: &QuadraticMap) -> Result<Outcome, Failure> {
    match solve(&q.extension_class()) {
        Ok(sol) => ok(
            json!({
                "L": sol.particular.to_strings(),
                "unique": sol.unique,
                "kernel_dim": sol.kernel_basis.len(),
            }),
            format!("L found; unique: {}", sol.unique),
        ),
        Err(Error::NotClosed) => negative(json!({ "bockstein_closed": false }), "no L: not Bockstein closed"),
        Err(e) => Err(e.into()),
    }
}

pub fn quotient(q: &QuadraticMap, opts: &GlobalOpts) -> Result<Outcome, Failure> {
    let a = QuotientAlgebra::new(&q.extension_class(), opts.max_degree)?;
    let report = a.report();
    let summary = format!(
        "dims {:?}; total {}; regular: {}",
        report.dims,
        report.dims.iter().sum::<usize>(),
        report.regular
    );
    ok(serde_json::to_value(&report).expect("serializable"), summary)
}

fn l_module(q: &QuadraticMap) -> Result<(PolyMatrix, QModule), Failure> {
    let class = q.extension_class();
    let l = solve(&class)?.particular;
    let module = module_from_l(&class, &l)?;
    Ok((l, module))
}

fn select_module(q: &QuadraticMap, choice: &str) -> Result<QModule, Failure> {
    let class = q.extension_class();
    match choice {
        "trivial" => Ok(QModule::trivial(1, q.m(), q.n())),
        "L" => Ok(l_module(q)?.1),
        _ if choice.starts_with("sym:") => {
            let i: usize = choice[4..]
                .parse()
                .map_err(|_| Failure::Usage(format!("bad symmetric power in '{choice}'")))?;
            Ok(sym_power_module(&class, &l_module(q)?.1, i)?)
        }
        path => {
            let value = read_json(Path::new(path))?;
            let rows = value
                .get("R")
                .and_then(Value::as_array)
                .ok_or_else(|| Failure::Usage("module file needs an \"R\" matrix".into()))?;
            let rows = rows
                .iter()
                .map(|r| Ok(parse_column(&strings(r, "R row")?, q.m())?))
                .collect::<Result<Vec<Vec<Poly>>, Failure>>()?;
            let r = PolyMatrix::from_rows(rows, q.m())?;
            Ok(module_from_action(&class, &r)?)
        }
    }
}

pub fn cohomology(q: &QuadraticMap, opts: &GlobalOpts, module: &str, max_p: usize) -> Result<Outcome, Failure> {
    let class = q.extension_class();
    if solve(&class).is_err() {
        return negative(json!({ "bockstein_closed": false }), "not Bockstein closed");
    }
    let u = select_module(q, module)?;
    let a = QuotientAlgebra::new(&class, opts.max_degree.max(max_p + 1))?;
    let complex = Complex::new(&a, &u)?;
    let report = complex.report(module, 0..=max_p)?;
    let summary = format!("H^p(Q, {module}) for p ≤ {max_p}: {:?}", report.dims.values().collect::<Vec<_>>());
    ok(serde_json::to_value(&report).expect("serializable"), summary)
}

pub fn group(q: &QuadraticMap, opts: &GlobalOpts, table: Option<&Path>) -> Result<Outcome, Failure> {
    let g = build_group_with_cap(q, opts.group_cap)?;
    let structure = verify_structure(&g, q)?;
    let effective = q.is_effective()?;
    let rank = two_rank(q)?;
    let mut report = json!({
        "m": q.m(),
        "n": q.n(),
        "order": g.order(),
        "center_order": g.center().len(),
        "frattini_order": g.frattini().len(),
        "two_rank": rank,
        "effective": effective,
        "is_frattini": q.is_frattini(),
        "structure": structure,
    });
    if let Ok(sol) = solve(&q.extension_class()) {
        let lattice = lattice_m(&sol.particular)?;
        report["lattice_multiplicative"] = json!(lattice.multiplicativity_failure().is_none());
    }
    if let Some(path) = table {
        let mut file = std::io::BufWriter::new(
            std::fs::File::create(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
        );
        g.write_table(&mut file)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    let summary = format!(
        "|G| = {}; structure checks {}; 2-rank {rank}",
        g.order(),
        if structure.passed() { "pass" } else { "FAIL" }
    );
    if structure.passed() {
        ok(report, summary)
    } else {
        negative(report, summary)
    }
}

pub fn realize(q: &QuadraticMap, opts: &GlobalOpts, morphism: &Path) -> Result<Outcome, Failure> {
    let file = read_json(morphism)?;
    let target = file
        .get("target")
        .ok_or_else(|| Failure::Usage("morphism file needs \"target\"".into()))?;
    let target = QuadraticMap::from_json(&target.to_string())?;
    let f_w = bit_matrix(file.get("f_w").unwrap_or(&Value::Null), "f_w")?;
    let f_v = bit_matrix(file.get("f_v").unwrap_or(&Value::Null), "f_v")?;
    let phi = QuadMorphism::new(f_w, f_v);
    if !phi.verify(q, &target) {
        return negative(json!({ "morphism": false }), "not a morphism of quadratic maps");
    }
    let g1 = build_group_with_cap(q, opts.group_cap)?;
    let g2 = build_group_with_cap(&target, opts.group_cap)?;
    let hom = realize_morphism(&phi, &g1, &g2)?;
    ok(
        json!({ "morphism": true, "homomorphism": true, "t": hom.t, "images": hom.table(g1.order()) }),
        format!("homomorphism of order {} → {} verified", g1.order(), g2.order()),
    )
}

pub fn betti(q: &QuadraticMap, opts: &GlobalOpts, degree: usize) -> Result<Outcome, Failure> {
    let caps = ResolutionCaps {
        max_order: opts.group_cap.min(ResolutionCaps::default().max_order),
        ..ResolutionCaps::default()
    };
    let report = poincare_check(q, degree, caps)?;
    let summary = format!("betti {:?}, predicted {:?}", report.betti, report.predicted);
    let value = serde_json::to_value(&report).expect("serializable");
    if report.matches {
        ok(value, summary)
    } else {
        negative(value, summary)
    }
}

fn read_eta(source: &str, q: &QuadraticMap) -> Result<Vec<Poly>, Failure> {
    if source == "zero" {
        return Ok(vec![Poly::zero(q.m()); q.n()]);
    }
    let value = read_json(Path::new(source))?;
    let entries = strings(value.get("eta").unwrap_or(&value), "eta")?;
    if entries.len() != q.n() {
        return Err(Failure::Usage(format!("eta needs {} entries, found {}", q.n(), entries.len())));
    }
    Ok(parse_column(&entries, q.m())?)
}

pub fn b2(q: &QuadraticMap, opts: &GlobalOpts, eta: &str) -> Result<Outcome, Failure> {
    let class = q.extension_class();
    let l = solve(&class)?.particular;
    let eta = read_eta(eta, q)?;
    let a = QuotientAlgebra::new(&class, opts.max_degree + 1)?;
    let model = B1Model::new(&a, &l, &eta, opts.max_degree)?;
    let direct = model.b2_direct()?;
    let decomp = b2_decomposition(&a, &l, &eta, opts.max_degree)?;
    let report = SpectralReport {
        b1: model.dims(),
        b2_direct: direct.dims.clone(),
        b2_decomp: decomp.dims.clone(),
        torsion_ge4_degrees: torsion_report(&direct),
    };
    let agree = direct.dims == decomp.dims;
    let summary = format!("B_2 {:?}; direct and decomposition agree: {agree}", direct.dims);
    let value = serde_json::to_value(&report).expect("serializable");
    if agree {
        ok(value, summary)
    } else {
        Err(Error::Internal("B_2 computed two ways disagrees".into()).into())
    }
}

pub fn obstruct(q: &QuadraticMap, opts: &GlobalOpts, eta: &str) -> Result<Outcome, Failure> {
    let class = q.extension_class();
    let (_, module) = l_module(q)?;
    let eta = read_eta(eta, q)?;
    let a = QuotientAlgebra::new(&class, opts.max_degree.max(4))?;
    let complex = Complex::new(&a, &module)?;
    let c = complex.cochain(3, eta)?;
    match complex.obstruction_test(&c)? {
        Obstruction::NotCocycle => negative(json!({ "class": "not_cocycle" }), "η is not a cocycle"),
        Obstruction::Coboundary(xi) => ok(
            json!({ "class": "coboundary", "xi": xi.to_strings() }),
            "η = δ(ξ): the obstruction vanishes",
        ),
        Obstruction::NontrivialClass => negative(json!({ "class": "nontrivial" }), "[η] ≠ 0 in H^3(Q, L)"),
    }
}
