use charid_core::arith::{Monomial, PolySeries, RingDescriptor};
use charid_core::grobner::{gbasis, normal_form, syzygies, ModuleVector};
use charid_core::Error;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

const SEED: u64 = 0x00c0_ffee;

fn ring() -> RingDescriptor {
    RingDescriptor::new(3, 3, vec!["s".into(), "t".into()], 10).unwrap()
}

fn poly() -> impl Strategy<Value = Vec<(u32, u32, u64)>> {
    prop::collection::vec((0u32..3, 0u32..3, 0u64..27), 0..4)
}

fn build(r: &RingDescriptor, terms: &[(u32, u32, u64)]) -> PolySeries {
    let mut f = PolySeries::zero(r);
    for &(a, b, c) in terms {
        f.add_term(Monomial::from_exponents(vec![a, b]), c);
    }
    f
}

fn vectors(rank: usize) -> impl Strategy<Value = Vec<Vec<Vec<(u32, u32, u64)>>>> {
    prop::collection::vec(prop::collection::vec(poly(), rank), 1..4)
}

fn to_series(r: &RingDescriptor, raw: &[Vec<Vec<(u32, u32, u64)>>]) -> Vec<ModuleVector> {
    raw.iter().map(|v| v.iter().map(|f| build(r, f)).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, rng_seed: RngSeed::Fixed(SEED), ..ProptestConfig::default() })]

    #[test]
    fn buchberger_criterion_holds(raw in vectors(2)) {
        let r = ring();
        let gens = to_series(&r, &raw);
        let g = gbasis(&gens);
        prop_assume!(!matches!(g, Err(Error::DegreeCapExceeded(_))));
        let g = g.unwrap();
        prop_assert!(g.satisfies_buchberger().unwrap());
        for v in &gens {
            prop_assert!(normal_form(v, &g).unwrap().iter().all(PolySeries::is_zero));
        }
        for h in g.generators() {
            prop_assert!(h.iter().all(|f| f.ring() == &r));
        }
    }

    #[test]
    fn syzygies_are_sound(raw in vectors(1)) {
        let r = ring();
        let gens = to_series(&r, &raw);
        let syz = syzygies(&gens);
        prop_assume!(!matches!(syz, Err(Error::DegreeCapExceeded(_))));
        for syz in syz.unwrap() {
            let mut acc = PolySeries::zero(&r);
            for (c, g) in syz.iter().zip(&gens) {
                acc = acc.try_add(&c.try_mul(&g[0]).unwrap()).unwrap();
            }
            prop_assert!(acc.is_zero());
        }
    }

    #[test]
    fn basis_is_deterministic(raw in vectors(2)) {
        let r = ring();
        let gens = to_series(&r, &raw);
        let first = gbasis(&gens);
        prop_assume!(!matches!(first, Err(Error::DegreeCapExceeded(_))));
        prop_assert_eq!(first.unwrap(), gbasis(&gens).unwrap());
    }
}
