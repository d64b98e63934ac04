use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use super::intpoly::IntPoly;
use super::monomial::Monomial;
use super::padic::PadicScalar;
use super::ring::RingDescriptor;
use crate::error::{Error, Result};

/// A truncated element of `Z_p[[t1..td]]`: coefficients mod `p^N`, every
/// stored monomial of total degree `< D`, no zero coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolySeries {
    ring: RingDescriptor,
    terms: BTreeMap<Monomial, u64>,
}

impl PolySeries {
    pub fn zero(ring: &RingDescriptor) -> Self {
        PolySeries {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &RingDescriptor) -> Self {
        Self::constant(ring, 1)
    }

    pub fn constant(ring: &RingDescriptor, c: i128) -> Self {
        let mut s = Self::zero(ring);
        s.add_term(Monomial::one(ring.nvars()), ring.coeffs().reduce_i128(c));
        s
    }

    pub fn var(ring: &RingDescriptor, i: usize) -> Self {
        let mut s = Self::zero(ring);
        s.add_term(Monomial::var(ring.nvars(), i, 1), 1);
        s
    }

    pub fn from_intpoly(ring: &RingDescriptor, f: &IntPoly) -> Self {
        assert_eq!(f.nvars(), ring.nvars());
        let zn = ring.coeffs();
        let mut s = Self::zero(ring);
        for (m, c) in f.terms() {
            s.add_term(m.clone(), zn.reduce_bigint(c));
        }
        s
    }

    /// Integer representative with symmetric residues.
    pub fn lift(&self) -> IntPoly {
        let zn = self.ring.coeffs();
        IntPoly::from_terms(
            self.ring.nvars(),
            self.terms
                .iter()
                .map(|(m, &c)| (m.clone(), BigInt::from(zn.symmetric(c)))),
        )
    }

    /// Adds a term, discarding it when its degree reaches the cap.
    pub fn add_term(&mut self, m: Monomial, c: u64) {
        if m.degree() >= self.ring.degree_cap() {
            return;
        }
        let zn = self.ring.coeffs();
        let c = c % zn.modulus();
        if c == 0 {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = zn.add(*e.get(), c);
                if sum == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, PadicScalar)> + '_ {
        let zn = self.ring.coeffs();
        self.terms.iter().map(move |(m, &c)| (m, zn.scalar(c)))
    }

    pub(crate) fn raw_terms(&self) -> &BTreeMap<Monomial, u64> {
        &self.terms
    }

    pub fn coeff(&self, m: &Monomial) -> PadicScalar {
        self.ring.coeffs().scalar(self.terms.get(m).copied().unwrap_or(0))
    }

    pub fn constant_term(&self) -> PadicScalar {
        self.coeff(&Monomial::one(self.ring.nvars()))
    }

    /// Minimal p-adic valuation over all coefficients; `None` when every
    /// coefficient vanishes mod `p^N`.
    pub fn valuation(&self) -> Option<u32> {
        let zn = self.ring.coeffs();
        self.terms.values().filter_map(|&c| zn.valuation(c)).min()
    }

    fn check(&self, other: &PolySeries) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &PolySeries) -> Result<PolySeries> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &PolySeries) -> Result<PolySeries> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> PolySeries {
        let zn = self.ring.coeffs();
        PolySeries {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, &c)| (m.clone(), zn.neg(c))).collect(),
        }
    }

    pub fn scale(&self, c: u64) -> PolySeries {
        let zn = self.ring.coeffs();
        let mut out = Self::zero(&self.ring);
        for (m, &a) in &self.terms {
            out.add_term(m.clone(), zn.mul(a, c));
        }
        out
    }

    pub fn try_mul(&self, other: &PolySeries) -> Result<PolySeries> {
        self.check(other)?;
        let zn = self.ring.coeffs();
        let cap = self.ring.degree_cap();
        let mut acc: BTreeMap<Monomial, u64> = BTreeMap::new();
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                if ma.degree() + mb.degree() >= cap {
                    continue;
                }
                let e = acc.entry(ma.mul(mb)).or_insert(0);
                *e = zn.add(*e, zn.mul(ca, cb));
            }
        }
        acc.retain(|_, c| *c != 0);
        Ok(PolySeries {
            ring: self.ring.clone(),
            terms: acc,
        })
    }

    pub fn pow(&self, e: u32) -> PolySeries {
        let mut acc = Self::one(&self.ring);
        for _ in 0..e {
            acc = acc.try_mul(self).expect("same ring");
        }
        acc
    }

    /// A power series is a unit iff its constant term is a p-adic unit.
    pub fn is_unit(&self) -> bool {
        self.constant_term().is_unit()
    }

    /// Substitutes `t_k = 0`, landing in the ring without `t_k`.
    pub fn project(&self, k: usize) -> Result<PolySeries> {
        let sub = self.ring.without_var(k)?;
        let mut out = Self::zero(&sub);
        for (m, &c) in &self.terms {
            if m.exponent(k) == 0 {
                out.add_term(m.drop_var(k), c);
            }
        }
        Ok(out)
    }

    /// Inverse of a unit, truncated at the degree cap.
    pub fn inverse(&self) -> Result<PolySeries> {
        let zn = self.ring.coeffs();
        let c0 = zn.inv(self.constant_term().value())?;
        // c0 * u = 1 - n with n having no constant term, so u^{-1} = c0 * sum n^k
        let normalized = self.scale(c0);
        let nil = Self::one(&self.ring).try_sub(&normalized)?;
        let mut acc = Self::one(&self.ring);
        let mut power = Self::one(&self.ring);
        for _ in 1..self.ring.degree_cap() {
            power = power.try_mul(&nil)?;
            if power.is_zero() {
                break;
            }
            acc = acc.try_add(&power)?;
        }
        Ok(acc.scale(c0))
    }

    /// Same terms, reinterpreted in a ring of the same shape (e.g. renamed
    /// variables or lower precision); coefficients are reduced.
    pub fn recast(&self, ring: &RingDescriptor) -> Result<PolySeries> {
        if ring.nvars() != self.ring.nvars() || ring.p() != self.ring.p() {
            return Err(Error::RingMismatch);
        }
        let mut out = Self::zero(ring);
        for (m, &c) in &self.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    /// Rendering with residues in `[0, p^N)`.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let names = self.ring.vars();
        self.terms
            .iter()
            .rev()
            .map(|(m, &c)| {
                if m.is_one() {
                    c.to_string()
                } else if c == 1 {
                    m.render(names)
                } else {
                    format!("{}*{}", c, m.render(names))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for PolySeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

pub fn series_mul(f: &PolySeries, g: &PolySeries) -> Result<PolySeries> {
    f.try_mul(g)
}

pub fn is_unit(f: &PolySeries) -> bool {
    f.is_unit()
}

pub fn project(f: &PolySeries, k: usize) -> Result<PolySeries> {
    f.project(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse::parse_series;

    fn ring(vars: &[&str], p: u64, n: u32, d: u32) -> RingDescriptor {
        RingDescriptor::new(p, n, vars.iter().map(|s| s.to_string()).collect(), d).unwrap()
    }

    #[test]
    fn mul_examples() {
        let r = ring(&["t"], 5, 3, 2);
        let t = PolySeries::var(&r, 0);
        assert!(series_mul(&t, &t).unwrap().is_zero());
        let one = PolySeries::one(&r);
        assert_eq!(series_mul(&one, &t).unwrap(), t);

        let r = ring(&["t"], 5, 3, 4);
        let f = parse_series(&r, "5 + t").unwrap();
        let g = parse_series(&r, "5 - t").unwrap();
        let oracle = parse_series(&r, "25 - t^2").unwrap();
        assert_eq!(series_mul(&f, &g).unwrap(), oracle);
        let other = ring(&["s"], 5, 3, 4);
        assert_eq!(series_mul(&f, &PolySeries::one(&other)), Err(Error::RingMismatch));
    }

    #[test]
    fn unit_examples() {
        let r = ring(&["t1", "t2"], 5, 3, 6);
        assert!(is_unit(&parse_series(&r, "1 + t1 + 5*t2").unwrap()));
        let r1 = ring(&["t"], 5, 3, 6);
        assert!(!is_unit(&parse_series(&r1, "5 + t").unwrap()));
        assert!(!is_unit(&PolySeries::zero(&r1)));
    }

    #[test]
    fn project_examples() {
        let r = ring(&["s", "t"], 5, 4, 8);
        let f = parse_series(&r, "25 + s + t").unwrap();
        assert_eq!(project(&f, 1).unwrap().render(), "s + 25");
        assert!(project(&parse_series(&r, "s*t").unwrap(), 1).unwrap().is_zero());
        let g = parse_series(&r, "1 + t*(s^2 + 3*t)").unwrap();
        assert_eq!(project(&g, 1).unwrap().render(), "1");
        assert!(matches!(project(&g, 2), Err(Error::BadVariable(_))));
    }

    #[test]
    fn inverse_of_unit() {
        let r = ring(&["s", "t"], 3, 4, 6);
        let u = parse_series(&r, "1 + s + 3*t").unwrap();
        let inv = u.inverse().unwrap();
        assert_eq!(u.try_mul(&inv).unwrap(), PolySeries::one(&r));
        assert_eq!(parse_series(&r, "3 + s").unwrap().inverse(), Err(Error::NonUnit));
    }
}
