use charid_core::arith::{IntPoly, RingDescriptor};
use charid_core::charideal::char_ideal;
use charid_core::modules::{
    elementary_to_presentation, quotient_by_t, t_torsion, t_torsion_part, torsion_is_consistent, ElementaryModule,
    PresentedModule,
};
use charid_core::sample::{random_poly, square_presentation};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x00c0_ffee;

fn ring() -> RingDescriptor {
    RingDescriptor::new(3, 8, vec!["s".into(), "t".into()], 24).unwrap()
}

fn elementary(rng: &mut ChaCha8Rng, r: &RingDescriptor, parts: usize) -> ElementaryModule {
    let mut gens = Vec::new();
    while gens.len() < parts {
        let f = random_poly(rng, r, 2, 3, true);
        if !f.is_zero() {
            gens.push((f, 1 + gens.len() as u32 % 2));
        }
    }
    ElementaryModule { ring: r.clone(), parts: gens }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, rng_seed: RngSeed::Fixed(SEED), ..ProptestConfig::default() })]

    #[test]
    fn torsion_generators_are_killed_by_t(seed in any::<u64>(), k in 1usize..3, inject in any::<bool>()) {
        let r = ring();
        let m = square_presentation(&mut ChaCha8Rng::seed_from_u64(seed), &r, k, inject);
        let part = t_torsion_part(&m, 1).unwrap();
        prop_assert!(torsion_is_consistent(&m, &part, 1).unwrap());
    }

    #[test]
    fn quotient_of_elementary_is_elementary(seed in any::<u64>(), parts in 1usize..4) {
        let r = ring();
        let e = elementary(&mut ChaCha8Rng::seed_from_u64(seed), &r, parts);
        let q = quotient_by_t(&elementary_to_presentation(&e).unwrap(), 1).unwrap();
        let sub = r.without_var(1).unwrap();
        let n = e.parts.len();
        let cols = e
            .parts
            .iter()
            .enumerate()
            .map(|(i, (f, k))| {
                let mut c = vec![IntPoly::zero(1); n];
                c[i] = f.project(1).pow(*k);
                c
            })
            .filter(|c| c.iter().any(|f| !f.is_zero()))
            .collect();
        prop_assert_eq!(q, PresentedModule::new(&sub, n, cols).unwrap());
    }

    #[test]
    fn free_modules_have_no_torsion(rank in 0usize..4) {
        let m = PresentedModule::free(&ring(), rank);
        prop_assert!(t_torsion(&m, 1).unwrap().is_zero());
    }

    #[test]
    fn redundant_relations_change_nothing(seed in any::<u64>(), k in 1usize..3) {
        let r = ring();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = square_presentation(&mut rng, &r, k, false);
        let a = random_poly(&mut rng, &r, 1, 2, false);
        let mut cols = m.relations().to_vec();
        let extra = cols[0].iter().map(|f| &a * f).collect();
        cols.push(extra);
        let bigger = PresentedModule::new(&r, k, cols).unwrap();
        prop_assert_eq!(char_ideal(&t_torsion(&m, 1).unwrap()).unwrap(), char_ideal(&t_torsion(&bigger, 1).unwrap()).unwrap());
        prop_assert_eq!(char_ideal(&m).unwrap(), char_ideal(&bigger).unwrap());
    }
}
