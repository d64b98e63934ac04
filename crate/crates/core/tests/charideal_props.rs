use charid_core::arith::{IntPoly, RingDescriptor};
use charid_core::charideal::{char_ideal, divisor_mul, renormalize, CharDivisor};
use charid_core::modules::{direct_sum, elementary_to_presentation, ElementaryModule, PresentedModule};
use charid_core::sample::{random_poly, square_presentation};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x00c0_ffee;

fn ring() -> RingDescriptor {
    RingDescriptor::new(5, 8, vec!["s".into(), "t".into()], 24).unwrap()
}

fn cofactor_det(a: &[Vec<IntPoly>]) -> IntPoly {
    let n = a.len();
    if n == 1 {
        return a[0][0].clone();
    }
    let mut acc = IntPoly::zero(a[0][0].nvars());
    for j in 0..n {
        let minor: Vec<Vec<IntPoly>> = a[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, f)| f.clone()).collect())
            .collect();
        let term = &a[0][j] * &cofactor_det(&minor);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

fn elementary(rng: &mut ChaCha8Rng, r: &RingDescriptor) -> PresentedModule {
    let parts = rng.gen_range(1..=2);
    let mut gens = Vec::new();
    while gens.len() < parts {
        let f = random_poly(rng, r, 2, 3, true);
        if !f.is_zero() {
            gens.push((f, rng.gen_range(1..=2)));
        }
    }
    elementary_to_presentation(&ElementaryModule { ring: r.clone(), parts: gens }).unwrap()
}

fn units(r: &RingDescriptor) -> Vec<IntPoly> {
    let n = r.nvars();
    vec![
        IntPoly::one(n),
        &IntPoly::one(n) + &IntPoly::var(n, 0),
        &IntPoly::constant(n, 2) - &IntPoly::var(n, 1),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, rng_seed: RngSeed::Fixed(SEED), ..ProptestConfig::default() })]

    #[test]
    fn square_char_ideal_is_determinant(seed in any::<u64>()) {
        let r = ring();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<IntPoly>> = (0..3)
            .map(|_| (0..3).map(|_| {
                let nonunit = rng.gen_bool(0.5);
                random_poly(&mut rng, &r, 1, 3, nonunit)
            }).collect())
            .collect();
        let cols: Vec<Vec<IntPoly>> = (0..3).map(|j| (0..3).map(|i| rows[i][j].clone()).collect()).collect();
        let m = PresentedModule::new(&r, 3, cols).unwrap();
        let det = cofactor_det(&rows);
        let ch = char_ideal(&m).unwrap();
        if det.is_zero() {
            prop_assert!(ch.is_zero());
        } else {
            prop_assert_eq!(ch, CharDivisor::from_generator(&r, &det).unwrap());
        }
    }

    #[test]
    fn direct_sums_multiply(seed in any::<u64>()) {
        let r = ring();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (elementary(&mut rng, &r), elementary(&mut rng, &r));
        let lhs = char_ideal(&direct_sum(&a, &b).unwrap()).unwrap();
        let rhs = divisor_mul(&char_ideal(&a).unwrap(), &char_ideal(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn normalization_is_idempotent(seed in any::<u64>()) {
        let r = ring();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nonunit = rng.gen_bool(0.7);
        let f = random_poly(&mut rng, &r, 3, 4, nonunit);
        prop_assume!(!f.is_zero());
        let u = &units(&r)[rng.gen_range(0..3)];
        let once = CharDivisor::from_generator(&r, &(&f * u)).unwrap();
        prop_assert_eq!(&once, &CharDivisor::from_generator(&r, &f).unwrap());
        let again = renormalize(&once).unwrap();
        prop_assert_eq!(&renormalize(&again).unwrap(), &again);
        prop_assert_eq!(again, once);
    }

    #[test]
    fn invariant_under_unimodular_changes(seed in any::<u64>(), k in 2usize..4) {
        let r = ring();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = square_presentation(&mut rng, &r, k, false);
        let mut cols = m.relations().to_vec();
        let us = units(&r);
        for _ in 0..3 {
            let (i, j) = (rng.gen_range(0..k), rng.gen_range(0..k));
            let a = random_poly(&mut rng, &r, 1, 2, false);
            let u = us[rng.gen_range(0..us.len())].clone();
            if i != j {
                // column op  c_i += a c_j
                let add: Vec<IntPoly> = cols[j].iter().map(|f| &a * f).collect();
                cols[i] = cols[i].iter().zip(&add).map(|(x, y)| x + y).collect();
                // row op  r_j += a r_i  (a change of generators)
                for c in cols.iter_mut() {
                    c[j] = &c[j] + &(&a * &c[i]);
                }
            }
            cols[i] = cols[i].iter().map(|f| &u * f).collect();
        }
        let moved = PresentedModule::new(&r, k, cols).unwrap();
        prop_assert_eq!(char_ideal(&moved).unwrap(), char_ideal(&m).unwrap());
    }
}
