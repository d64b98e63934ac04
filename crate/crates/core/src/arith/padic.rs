//! Residues modulo `p^N`, the finite-precision model of `Z_p`.

use std::fmt;

use crate::error::{Error, Result};

/// Largest modulus accepted, so that products of two residues fit in `u128`
/// with headroom and `p * modulus` still fits in `u64`.
const MAX_MODULUS: u64 = 1 << 61;

/// The coefficient ring `Z/p^N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Zpn {
    p: u64,
    prec: u32,
    modulus: u64,
}

impl Zpn {
    pub fn new(p: u64, prec: u32) -> Result<Self> {
        if p < 2 || !is_prime(p) {
            return Err(Error::InvalidRing(format!("{p} is not a prime")));
        }
        if prec == 0 {
            return Err(Error::InvalidRing("precision must be positive".into()));
        }
        let mut modulus: u64 = 1;
        for _ in 0..prec {
            modulus = modulus
                .checked_mul(p)
                .filter(|m| *m <= MAX_MODULUS)
                .ok_or_else(|| Error::InvalidRing(format!("{p}^{prec} exceeds the supported modulus")))?;
        }
        Ok(Zpn { p, prec, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The same prime at a different precision.
    pub fn with_precision(&self, prec: u32) -> Result<Self> {
        Zpn::new(self.p, prec)
    }

    pub fn reduce_i128(&self, x: i128) -> u64 {
        x.rem_euclid(self.modulus as i128) as u64
    }

    pub fn reduce_bigint(&self, x: &num_bigint::BigInt) -> u64 {
        use num_integer::Integer;
        use num_traits::ToPrimitive;
        let m = num_bigint::BigInt::from(self.modulus);
        x.mod_floor(&m).to_u64().expect("residue fits in u64")
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.modulus;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// `p^k` reduced, zero once `k >= N`.
    pub fn p_power(&self, k: u32) -> u64 {
        if k >= self.prec {
            0
        } else {
            self.p.pow(k)
        }
    }

    /// Valuation of a residue; `None` means the residue is zero, i.e. the
    /// valuation is at least `N`.
    pub fn valuation(&self, mut a: u64) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let mut v = 0;
        while a % self.p == 0 {
            a /= self.p;
            v += 1;
        }
        Some(v)
    }

    pub fn is_unit(&self, a: u64) -> bool {
        a % self.p != 0
    }

    /// Inverse of a unit residue via the extended Euclidean algorithm.
    pub fn inv(&self, a: u64) -> Result<u64> {
        if !self.is_unit(a) {
            return Err(Error::NonUnit);
        }
        let (mut r0, mut r1) = (self.modulus as i128, a as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.reduce_i128(s0))
    }

    /// Splits `a = p^v * u` with `u` a unit; `None` for zero.
    pub fn split(&self, a: u64) -> Option<(u32, u64)> {
        let v = self.valuation(a)?;
        Some((v, a / self.p.pow(v)))
    }

    /// Symmetric representative in `(-p^N/2, p^N/2]`.
    pub fn symmetric(&self, a: u64) -> i128 {
        if a > self.modulus / 2 {
            a as i128 - self.modulus as i128
        } else {
            a as i128
        }
    }

    pub fn scalar(&self, value: u64) -> PadicScalar {
        PadicScalar {
            ring: *self,
            value: value % self.modulus,
        }
    }

    pub fn scalar_i128(&self, value: i128) -> PadicScalar {
        PadicScalar {
            ring: *self,
            value: self.reduce_i128(value),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A p-adic integer known modulo `p^N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PadicScalar {
    ring: Zpn,
    value: u64,
}

impl PadicScalar {
    pub fn ring(&self) -> Zpn {
        self.ring
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// `None` is the "at least N" marker for residues indistinguishable from 0.
    pub fn valuation(&self) -> Option<u32> {
        self.ring.valuation(self.value)
    }

    pub fn is_unit(&self) -> bool {
        self.ring.is_unit(self.value)
    }

    pub fn invert(&self) -> Result<PadicScalar> {
        Ok(self.ring.scalar(self.ring.inv(self.value)?))
    }

    fn check(&self, other: &PadicScalar) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &PadicScalar) -> Result<PadicScalar> {
        self.check(other)?;
        Ok(self.ring.scalar(self.ring.add(self.value, other.value)))
    }

    pub fn try_mul(&self, other: &PadicScalar) -> Result<PadicScalar> {
        self.check(other)?;
        Ok(self.ring.scalar(self.ring.mul(self.value, other.value)))
    }

    /// Reduction to a lower precision.
    pub fn reduce_to(&self, prec: u32) -> Result<PadicScalar> {
        let lower = self.ring.with_precision(prec)?;
        Ok(lower.scalar(self.value))
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Inverse of a unit scalar.
pub fn padic_invert(x: &PadicScalar) -> Result<PadicScalar> {
    x.invert()
}
