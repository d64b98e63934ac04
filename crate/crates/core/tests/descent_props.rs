use charid_core::arith::RingDescriptor;
use charid_core::charideal::{char_ideal, is_pseudo_null, project_divisor};
use charid_core::descent::pseudo_null_via_descent;
use charid_core::modules::{elementary_to_presentation, quotient_by_t, ElementaryModule, PresentedModule};
use charid_core::sample::{pseudo_null_pair, random_poly};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x00c0_ffee;

fn ring() -> RingDescriptor {
    RingDescriptor::new(3, 8, vec!["s".into(), "t".into()], 24).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, rng_seed: RngSeed::Fixed(SEED), ..ProptestConfig::default() })]

    #[test]
    fn snake_lemma_for_elementary_modules(seed in any::<u64>()) {
        let r = ring();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut parts = Vec::new();
        while parts.len() < rng.gen_range(1..=2) {
            let f = random_poly(&mut rng, &r, 2, 3, true);
            if !f.project(1).is_zero() {
                parts.push((f, rng.gen_range(1..=2)));
            }
        }
        let e = elementary_to_presentation(&ElementaryModule { ring: r.clone(), parts }).unwrap();
        let below = char_ideal(&quotient_by_t(&e, 1).unwrap()).unwrap();
        let projected = project_divisor(&char_ideal(&e).unwrap(), 1).unwrap();
        prop_assert_eq!(below, projected);
    }

    #[test]
    fn descent_agrees_with_direct_test(seed in any::<u64>(), pair in any::<bool>()) {
        let r = ring();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = if pair {
            pseudo_null_pair(&mut rng, &r)
        } else {
            let f = random_poly(&mut rng, &r, 2, 3, true);
            let g = random_poly(&mut rng, &r, 1, 3, true);
            let h = random_poly(&mut rng, &r, 1, 2, false);
            PresentedModule::cyclic(&r, vec![&f * &h, &g * &h]).unwrap()
        };
        if let (Ok(a), Ok(b)) = (pseudo_null_via_descent(&m, 1), is_pseudo_null(&m)) {
            prop_assert_eq!(a, b);
        }
    }
}
