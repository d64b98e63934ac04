//! Seeded random inputs for the property suites.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;

use crate::arith::intpoly::{gcd, IntPoly};
use crate::arith::monomial::Monomial;
use crate::arith::ring::RingDescriptor;
use crate::charideal::is_torsion;
use crate::modules::{elementary_to_presentation, ElementaryModule, PresentedModule};
use crate::tower::Tower;

/// Dense-ish random polynomial of total degree `<= deg` with coefficients in
/// `[-bound, bound]`; a non-unit when `nonunit` (constant term a multiple of `p`).
pub fn random_poly<R: Rng>(rng: &mut R, ring: &RingDescriptor, deg: u32, bound: i64, nonunit: bool) -> IntPoly {
    let n = ring.nvars();
    let mut f = IntPoly::zero(n);
    for m in monomials_up_to(n, deg) {
        if rng.gen_bool(0.5) {
            f.add_term(m, BigInt::from(rng.gen_range(-bound..=bound)));
        }
    }
    if nonunit {
        let c0 = f.constant_term();
        f.add_term(Monomial::one(n), -c0);
        let k: i64 = rng.gen_range(-2..=2);
        f.add_term(Monomial::one(n), BigInt::from(k * ring.p() as i64));
    }
    f
}

fn monomials_up_to(n: usize, deg: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one(n)];
    for i in 0..n {
        let mut next = Vec::new();
        for m in &out {
            let used = m.degree();
            for e in 1..=deg - used {
                let mut exps = m.exponents().to_vec();
                exps[i] = e;
                next.push(Monomial::from_exponents(exps));
            }
        }
        out.extend(next);
    }
    out.sort();
    out
}

fn is_series_unit(f: &IntPoly, p: u64) -> bool {
    !(f.constant_term() % BigInt::from(p)).is_zero()
}

/// `B/(f, g)` with non-unit `f`, `g` of degree `<= 3` whose gcd is a unit
/// in the power-series ring.
pub fn pseudo_null_pair<R: Rng>(rng: &mut R, ring: &RingDescriptor) -> PresentedModule {
    loop {
        let f = random_poly(rng, ring, 3, 4, true);
        let g = random_poly(rng, ring, 3, 4, true);
        if f.is_zero() || g.is_zero() {
            continue;
        }
        let h = gcd(&f, &g);
        if is_series_unit(&h, ring.p()) {
            return PresentedModule::cyclic(ring, vec![f, g]).expect("cyclic presentation");
        }
    }
}

/// A torsion square presentation of size `k`; with `inject_t` the first
/// relation is multiplied by the last variable.
pub fn square_presentation<R: Rng>(rng: &mut R, ring: &RingDescriptor, k: usize, inject_t: bool) -> PresentedModule {
    let n = ring.nvars();
    loop {
        let mut cols: Vec<Vec<IntPoly>> = (0..k)
            .map(|_| {
                (0..k)
                    .map(|_| {
                        let nonunit = rng.gen_bool(0.5);
                        random_poly(rng, ring, 2, 4, nonunit)
                    })
                    .collect()
            })
            .collect();
        if inject_t {
            let t = IntPoly::var(n, n - 1);
            cols[0] = cols[0].iter().map(|f| &t * f).collect();
        }
        let m = PresentedModule::new(ring, k, cols).expect("square presentation");
        if is_torsion(&m) {
            return m;
        }
    }
}

/// A random elementary module over `Z_p[[t]]` with its expected `(mu, lambda)`.
/// Each summand is `p^e` or `P^e` for a distinguished `P`, possibly multiplied
/// by a unit.
pub fn elementary_d1<R: Rng>(rng: &mut R, ring: &RingDescriptor) -> (PresentedModule, (u32, u32)) {
    assert_eq!(ring.nvars(), 1);
    let p = ring.p() as i64;
    let parts = rng.gen_range(1..=3);
    let (mut mu, mut lambda) = (0, 0);
    let mut gens = Vec::new();
    for _ in 0..parts {
        let e = rng.gen_range(1..=2u32);
        if rng.gen_bool(0.35) {
            gens.push((IntPoly::constant(1, p), e));
            mu += e;
        } else {
            let deg = rng.gen_range(1..=2u32);
            let mut f = IntPoly::term(Monomial::var(1, 0, deg), 1);
            for i in 0..deg {
                let c = rng.gen_range(-2..=2i64) * p;
                f.add_term(Monomial::var(1, 0, i), BigInt::from(c));
            }
            gens.push((f, e));
            lambda += deg * e;
        }
    }
    let mut m = elementary_to_presentation(&ElementaryModule {
        ring: ring.clone(),
        parts: gens,
    })
    .expect("non-unit parts");
    if rng.gen_bool(0.5) {
        // u = 1 + t + c*p is a unit; scaling a relation by it changes nothing
        let u = &IntPoly::var(1, 0) + &IntPoly::constant(1, 1 + p * rng.gen_range(0..=1i64));
        let mut cols = m.relations().to_vec();
        cols[0] = cols[0].iter().map(|f| &u * f).collect();
        m = PresentedModule::new(ring, m.generators(), cols).expect("same shape");
    }
    (m, (mu, lambda))
}

/// Tower of successive quotients of a random cyclic module over `ring`.
pub fn random_tower<R: Rng>(rng: &mut R, ring: &RingDescriptor, d0: usize) -> Tower {
    let n = ring.nvars();
    let mut rels = Vec::new();
    let count = rng.gen_range(1..=2);
    while rels.len() < count {
        let mut f = random_poly(rng, ring, 2, 3, true);
        // keep the generator small: most terms in the first variables
        f = IntPoly::from_terms(
            n,
            f.terms()
                .filter(|(m, _)| (1..n).all(|i| m.exponent(i) <= 1))
                .map(|(m, c)| (m.clone(), c.clone())),
        );
        if !f.is_zero() {
            rels.push(f);
        }
    }
    let top = PresentedModule::cyclic(ring, rels).expect("cyclic presentation");
    Tower::from_top(&top, d0).expect("valid levels")
}
