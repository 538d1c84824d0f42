use quadcoh::bockstein::{check_p, module_from_l, solve_l};
use quadcoh::gf2::BitVec;
use quadcoh::poly::Poly;
use quadcoh::quadmap::QuadraticMap;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn all_maps(max: usize) -> impl Iterator<Item = QuadraticMap> {
    (0..=max).flat_map(move |m| {
        (0..=max).flat_map(move |n| (0..QuadraticMap::code_count(m, n)).map(move |c| QuadraticMap::from_code(m, n, c)))
    })
}

#[test]
fn p_exists_iff_l_exists_small() {
    for q in all_maps(2) {
        let closed = solve_l(&q.extension_class()).is_ok();
        let p = check_p(&q).unwrap();
        assert_eq!(p.is_some(), closed, "{q:?}");
    }
}

#[test]
fn p_exists_iff_l_exists_random_m3() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let q = QuadraticMap::random(3, 3, &mut rng);
        let closed = solve_l(&q.extension_class()).is_ok();
        assert_eq!(check_p(&q).unwrap().is_some(), closed, "{q:?}");
    }
}

#[test]
fn solutions_satisfy_defining_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut closed = 0;
    for _ in 0..300 {
        let q = QuadraticMap::random(3, 2, &mut rng);
        let class = q.extension_class();
        let Ok(sol) = solve_l(&class) else { continue };
        closed += 1;
        let bq: Vec<Poly> = class.components().iter().map(Poly::bockstein).collect();
        assert_eq!(sol.particular.apply(class.components()).unwrap(), bq);
        for k in &sol.kernel_basis {
            assert!(k.apply(class.components()).unwrap().iter().all(Poly::is_zero));
        }
        if let Ok(module) = module_from_l(&class, &sol.particular) {
            assert!(module.check_representation(&class));
        }
        let p = check_p(&q).unwrap().unwrap();
        for w in 0..8 {
            for w2 in 0..8 {
                assert!(p.holds_at(&q, &BitVec::from_u64(w, 3), &BitVec::from_u64(w2, 3)));
            }
        }
    }
    assert!(closed > 10);
}
