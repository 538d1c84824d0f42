use quadcoh::gf2::BitMatrix;
use quadcoh::group::{build_group, homomorphism_failure, realize_morphism, two_rank, verify_structure, FiniteTwoGroup};
use quadcoh::quadmap::{examples, QuadMorphism, QuadraticMap};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Largest elementary abelian subgroup, by search over commuting involutions
/// using only the multiplication of `g`.
fn brute_two_rank(g: &FiniteTwoGroup) -> usize {
    let involutions: Vec<u64> = (1..g.order()).filter(|&x| g.mul(x, x) == g.identity()).collect();
    fn extend(g: &FiniteTwoGroup, inv: &[u64], start: usize, chosen: &mut Vec<u64>, best: &mut usize) {
        *best = (*best).max(chosen.len());
        let span = g.subgroup_generated(chosen);
        for (i, &x) in inv.iter().enumerate().skip(start) {
            if span.contains(&x) || chosen.iter().any(|&y| g.mul(x, y) != g.mul(y, x)) {
                continue;
            }
            chosen.push(x);
            extend(g, inv, i + 1, chosen, best);
            chosen.pop();
        }
    }
    let mut best = 0;
    extend(g, &involutions, 0, &mut Vec::new(), &mut best);
    best
}

fn small_maps() -> impl Iterator<Item = QuadraticMap> {
    (1..=3).flat_map(|m| (0..=2).flat_map(move |n| (0..QuadraticMap::code_count(m, n)).map(move |c| QuadraticMap::from_code(m, n, c))))
}

#[test]
fn two_rank_matches_subgroup_search() {
    let mut checked = 0;
    for q in small_maps().step_by(7) {
        let g = build_group(&q).unwrap();
        assert_eq!(two_rank(&q).unwrap(), brute_two_rank(&g), "{q:?}");
        checked += 1;
    }
    assert!(checked > 20);
}

#[test]
fn two_rank_is_n_exactly_when_effective() {
    for q in small_maps() {
        let effective = q.is_effective().unwrap();
        assert_eq!(two_rank(&q).unwrap() == q.n(), effective, "{q:?}");
    }
}

#[test]
fn every_small_group_passes_structure_checks() {
    for q in small_maps() {
        let g = build_group(&q).unwrap();
        assert_eq!(g.order(), 1 << (q.m() + q.n()));
        let report = verify_structure(&g, &q).unwrap();
        assert!(report.passed(), "{q:?}: {:?}", report.failures);
        assert!((0..g.order()).all(|x| g.pow(x, 4) == g.identity()));
    }
}

fn random_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> BitMatrix {
    let bits: Vec<Vec<u8>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(0..=1)).collect()).collect();
    BitMatrix::from_bits(&bits)
}

/// Any linear `f` commutes with coordinatewise squaring, so `(f, f)` is a
/// morphism between squares maps.
fn squares_morphism(from: usize, to: usize, rng: &mut ChaCha8Rng) -> QuadMorphism {
    let f = random_matrix(to, from, rng);
    QuadMorphism::new(f.clone(), f)
}

#[test]
fn realization_is_functorial() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let (a, b, c) = (rng.gen_range(1..=3), rng.gen_range(1..=3), rng.gen_range(1..=3));
        let (qa, qb, qc) = (examples::z4_power(a), examples::z4_power(b), examples::z4_power(c));
        let (ga, gb, gc) = (build_group(&qa).unwrap(), build_group(&qb).unwrap(), build_group(&qc).unwrap());
        let psi = squares_morphism(a, b, &mut rng);
        let phi = squares_morphism(b, c, &mut rng);
        assert!(psi.verify(&qa, &qb) && phi.verify(&qb, &qc));

        let h_psi = realize_morphism(&psi, &ga, &gb).unwrap();
        let h_phi = realize_morphism(&phi, &gb, &gc).unwrap();
        let h_comp = realize_morphism(&QuadMorphism::compose(&phi, &psi).unwrap(), &ga, &gc).unwrap();
        assert_eq!(homomorphism_failure(&h_psi, &ga, &gb), None);
        assert_eq!(homomorphism_failure(&h_phi, &gb, &gc), None);
        assert_eq!(homomorphism_failure(&h_comp, &ga, &gc), None);
        for x in 0..ga.order() {
            let direct = h_comp.apply(x);
            let stepwise = h_phi.apply(h_psi.apply(x));
            assert_eq!(gc.parts(direct).1, gc.parts(stepwise).1);
            if ga.parts(x).1 == 0 {
                assert_eq!(direct, stepwise);
            }
        }
    }
}

#[test]
fn identity_morphism_realizes_to_a_homomorphism() {
    for q in [examples::u3(), examples::z4_power(2), QuadraticMap::zero(2, 1)] {
        let g = build_group(&q).unwrap();
        let hom = realize_morphism(&QuadMorphism::identity(&q), &g, &g).unwrap();
        assert_eq!(homomorphism_failure(&hom, &g, &g), None);
        for x in 0..g.order() {
            assert_eq!(g.parts(hom.apply(x)).1, g.parts(x).1);
        }
    }
}
