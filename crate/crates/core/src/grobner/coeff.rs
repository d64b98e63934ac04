use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt::Debug;

use crate::arith::intpoly::valuation_big;
use crate::arith::padic::Zpn;

/// Coefficient rings whose ideals are powers of `p`: the chain ring `Z/p^N`
/// and the local ring `Z_(p)`.
pub trait CoeffRing: Clone + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// p-adic valuation of a nonzero element.
    fn valuation(&self, a: &Self::Elem) -> u32;
    /// For `v(c) <= v(e)`: a unit `u` and `q` with `u * e = q * c`.
    fn divide_lead(&self, c: &Self::Elem, e: &Self::Elem) -> (Self::Elem, Self::Elem);
    /// Generator of the annihilator of `a`, when it is a nonzero proper ideal.
    fn annihilator(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// A unit `u` such that dividing the coefficients by `u` gives the canonical
    /// associate; `coeffs[0]` is the leading coefficient.
    fn normalizer(&self, coeffs: &[&Self::Elem]) -> Option<Self::Elem>;
    fn div_unit(&self, a: &Self::Elem, u: &Self::Elem) -> Self::Elem;
    /// Whether the product criterion may skip pairs of ideal generators with
    /// coprime leading monomials and unit leading coefficients.
    fn product_criterion(&self) -> bool;
}

impl CoeffRing for Zpn {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.modulus()
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        Zpn::add(self, *a, *b)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        Zpn::sub(self, *a, *b)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        Zpn::mul(self, *a, *b)
    }
    fn neg(&self, a: &u64) -> u64 {
        Zpn::neg(self, *a)
    }
    fn valuation(&self, a: &u64) -> u32 {
        Zpn::valuation(self, *a).expect("nonzero")
    }
    fn divide_lead(&self, c: &u64, e: &u64) -> (u64, u64) {
        let (vc, wc) = self.split(*c).expect("nonzero");
        let (ve, we) = self.split(*e).expect("nonzero");
        debug_assert!(vc <= ve);
        let q = Zpn::mul(self, self.p_power(ve - vc), Zpn::mul(self, we, self.inv(wc).expect("unit")));
        (1, q)
    }
    fn annihilator(&self, a: &u64) -> Option<u64> {
        match Zpn::valuation(self, *a)? {
            0 => None,
            v => Some(self.p_power(self.precision() - v)),
        }
    }
    fn normalizer(&self, coeffs: &[&u64]) -> Option<u64> {
        let (_, w) = self.split(*coeffs[0])?;
        (w != 1).then_some(w)
    }
    fn div_unit(&self, a: &u64, u: &u64) -> u64 {
        Zpn::mul(self, *a, self.inv(*u).expect("unit"))
    }
    fn product_criterion(&self) -> bool {
        false
    }
}

/// The localization `Z_(p)`, elements represented by integers; integers
/// prime to `p` are units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalInt {
    p: u64,
}

impl LocalInt {
    pub fn new(p: u64) -> Self {
        LocalInt { p }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    fn split(&self, a: &BigInt) -> (u32, BigInt) {
        let v = valuation_big(a, self.p);
        (v, a / BigInt::from(self.p).pow(v))
    }
}

impl CoeffRing for LocalInt {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn valuation(&self, a: &BigInt) -> u32 {
        valuation_big(a, self.p)
    }
    fn divide_lead(&self, c: &BigInt, e: &BigInt) -> (BigInt, BigInt) {
        let (vc, wc) = self.split(c);
        let (ve, we) = self.split(e);
        debug_assert!(vc <= ve);
        let g = wc.gcd(&we);
        let u = &wc / &g;
        let q = BigInt::from(self.p).pow(ve - vc) * (&we / &g);
        (u, q)
    }
    fn annihilator(&self, _a: &BigInt) -> Option<BigInt> {
        None
    }
    fn normalizer(&self, coeffs: &[&BigInt]) -> Option<BigInt> {
        let mut g = BigInt::zero();
        for c in coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        let (_, mut w) = self.split(&g);
        if coeffs[0].is_negative() {
            w = -w;
        }
        (!w.is_one()).then_some(w)
    }
    fn div_unit(&self, a: &BigInt, u: &BigInt) -> BigInt {
        a / u
    }
    fn product_criterion(&self) -> bool {
        true
    }
}
