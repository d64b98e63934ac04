use charid_core::arith::RingDescriptor;
use charid_core::charideal::{divisor_divides, project_divisor};
use charid_core::sample::random_tower;
use charid_core::tower::pro_char_ideal;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x00c0_ffee;

fn ring(d: usize) -> RingDescriptor {
    RingDescriptor::standard(3, 6, d, 12).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, rng_seed: RngSeed::Fixed(SEED), ..ProptestConfig::default() })]

    #[test]
    fn coherence_is_sound(seed in any::<u64>(), d in 2usize..4) {
        let tower = random_tower(&mut ChaCha8Rng::seed_from_u64(seed), &ring(d), 1);
        let report = pro_char_ideal(&tower).unwrap();
        prop_assume!(report.is_defined());
        for pair in report.levels.windows(2) {
            let down = project_divisor(&pair[1].ch, pair[1].d - 1).unwrap();
            prop_assert!(divisor_divides(&pair[0].ch, &down).unwrap());
        }
    }

    #[test]
    fn exact_coherence_propagates_the_limit(seed in any::<u64>(), d in 2usize..4) {
        let tower = random_tower(&mut ChaCha8Rng::seed_from_u64(seed), &ring(d), 1);
        let report = pro_char_ideal(&tower).unwrap();
        prop_assume!(report.is_defined());
        prop_assume!(report.levels.iter().skip(1).all(|l| l.coherent_exactly == Some(true)));
        let mut x = report.limit.clone();
        for level in report.levels.iter().rev() {
            prop_assert_eq!(&x, &level.ch);
            if level.d > 1 {
                x = project_divisor(&x, level.d - 1).unwrap();
            }
        }
    }
}
