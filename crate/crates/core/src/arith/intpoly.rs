//! Exact sparse polynomials over `Z`, the lifted representatives used by the
//! minor/gcd pipeline.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl IntPoly {
    pub fn zero(nvars: usize) -> Self {
        IntPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigInt::one())
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(Monomial::var(nvars, i, 1), 1)
    }

    pub fn term(m: Monomial, c: impl Into<BigInt>) -> Self {
        let nvars = m.nvars();
        let mut p = IntPoly::zero(nvars);
        p.add_term(m, c.into());
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut p = IntPoly::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars);
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(&Monomial::one(self.nvars))
    }

    /// Leading term under grevlex.
    pub fn lead(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.last_key_value()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exponent(i)).max()
    }

    pub fn involves(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.exponent(i) > 0)
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        if c.is_zero() {
            return IntPoly::zero(self.nvars);
        }
        IntPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &BigInt) -> IntPoly {
        if c.is_zero() {
            return IntPoly::zero(self.nvars);
        }
        IntPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> IntPoly {
        let mut acc = IntPoly::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Non-negative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive(&self) -> IntPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.lead().unwrap().1.is_negative() {
            c = -c;
        }
        self.div_scalar(&c)
    }

    /// Sign normalization only.
    pub fn positive(&self) -> IntPoly {
        match self.lead() {
            Some((_, c)) if c.is_negative() => -self,
            _ => self.clone(),
        }
    }

    /// Exact division by an integer; panics if inexact.
    pub fn div_scalar(&self, c: &BigInt) -> IntPoly {
        IntPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| {
                    let (q, r) = a.div_rem(c);
                    assert!(r.is_zero(), "inexact scalar division");
                    (m.clone(), q)
                })
                .collect(),
        }
    }

    /// Largest `k` with `p^k` dividing every coefficient; `None` for zero.
    pub fn p_content(&self, p: u64) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        Some(valuation_big(&self.content(), p))
    }

    /// Exact quotient `self / d` in `Z[x]`, or `None` if `d` does not divide.
    pub fn exact_div(&self, d: &IntPoly) -> Option<IntPoly> {
        let (lm, lc) = d.lead()?;
        let mut q = IntPoly::zero(self.nvars);
        let mut r = self.clone();
        while let Some((m, c)) = r.lead() {
            if !lm.divides(m) {
                return None;
            }
            let (qc, rem) = c.div_rem(lc);
            if !rem.is_zero() {
                return None;
            }
            let qm = lm.quotient_of(m);
            r = &r - &d.mul_term(&qm, &qc);
            q.add_term(qm, qc);
        }
        Some(q)
    }

    /// Substitutes `t_k = 0` and removes the variable.
    pub fn project(&self, k: usize) -> IntPoly {
        IntPoly {
            nvars: self.nvars - 1,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exponent(k) == 0)
                .map(|(m, c)| (m.drop_var(k), c.clone()))
                .collect(),
        }
    }

    /// Substitutes `t_k = 0` keeping the variable.
    pub fn set_zero(&self, k: usize) -> IntPoly {
        IntPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exponent(k) == 0)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Embeds into a ring with an extra variable inserted at index `k`.
    pub fn insert_var(&self, k: usize) -> IntPoly {
        IntPoly {
            nvars: self.nvars + 1,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.insert_var(k, 0), c.clone()))
                .collect(),
        }
    }

    /// Renames variables: variable `i` becomes variable `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> IntPoly {
        IntPoly::from_terms(
            self.nvars,
            self.terms.iter().map(|(m, c)| (m.permute(perm), c.clone())),
        )
    }

    /// Substitutes `t_i -> t_i + c[i]`.
    pub fn shift(&self, c: &[i64]) -> IntPoly {
        let lin: Vec<IntPoly> = (0..self.nvars)
            .map(|i| &IntPoly::var(self.nvars, i) + &IntPoly::constant(self.nvars, c[i]))
            .collect();
        let mut out = IntPoly::zero(self.nvars);
        for (m, coef) in &self.terms {
            let mut acc = IntPoly::constant(self.nvars, coef.clone());
            for (i, l) in lin.iter().enumerate() {
                let e = m.exponent(i);
                if e > 0 {
                    acc = &acc * &l.pow(e);
                }
            }
            out = &out + &acc;
        }
        out
    }

    pub fn derivative(&self, i: usize) -> IntPoly {
        let mut out = IntPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponent(i);
            if e > 0 {
                let mut exps = m.exponents().to_vec();
                exps[i] -= 1;
                out.add_term(Monomial::from_exponents(exps), c * BigInt::from(e));
            }
        }
        out
    }

    /// Coefficients as a polynomial in `t_v`: exponent of `t_v` to the
    /// coefficient (which no longer involves `t_v`).
    pub fn coeffs_in(&self, v: usize) -> BTreeMap<u32, IntPoly> {
        let mut out: BTreeMap<u32, IntPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut exps = m.exponents().to_vec();
            let e = std::mem::take(&mut exps[v]);
            out.entry(e)
                .or_insert_with(|| IntPoly::zero(self.nvars))
                .add_term(Monomial::from_exponents(exps), c.clone());
        }
        out
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                out.push_str(&a.to_string());
            } else if a.is_one() {
                out.push_str(&m.render(names));
            } else {
                out.push_str(&format!("{}*{}", a, m.render(names)));
            }
        }
        out
    }
}

pub fn valuation_big(x: &BigInt, p: u64) -> u32 {
    if x.is_zero() {
        return u32::MAX;
    }
    let p = BigInt::from(p);
    let mut v = 0;
    let mut x = x.clone();
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        x = q;
        v += 1;
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("t{i}")).collect();
        f.write_str(&self.render(&names))
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        let mut out = IntPoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $f(self, rhs: IntPoly) -> IntPoly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

// ---------------------------------------------------------------------------
// gcd over Z[x1..xn]

/// Greatest common divisor in `Z[x1..xn]`, with positive leading coefficient.
/// `gcd(0, 0) = 0`.
pub fn gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    if a.is_zero() {
        return b.positive();
    }
    if b.is_zero() {
        return a.positive();
    }
    let nvars = a.nvars;
    let main = (0..nvars).rev().find(|&i| a.involves(i) || b.involves(i));
    let Some(v) = main else {
        return IntPoly::constant(nvars, a.constant_term().gcd(&b.constant_term()));
    };
    let (ca, pa) = split_content(a, v);
    let (cb, pb) = split_content(b, v);
    let c = gcd(&ca, &cb);
    let g = primitive_prs(pa, pb, v);
    (&c * &g).positive()
}

/// Content with respect to `t_v` (a polynomial free of `t_v`) and the
/// corresponding primitive part.
pub fn split_content(a: &IntPoly, v: usize) -> (IntPoly, IntPoly) {
    let coeffs = a.coeffs_in(v);
    let mut c = IntPoly::zero(a.nvars);
    for q in coeffs.values() {
        c = gcd(&c, q);
        if c.is_one() {
            break;
        }
    }
    let pp = a.exact_div(&c).expect("content divides");
    (c, pp)
}

fn lead_in(a: &IntPoly, v: usize) -> (u32, IntPoly) {
    let coeffs = a.coeffs_in(v);
    let (d, c) = coeffs.into_iter().next_back().expect("nonzero");
    (d, c)
}

fn pseudo_rem(a: &IntPoly, b: &IntPoly, v: usize) -> IntPoly {
    let (db, lb) = lead_in(b, v);
    let mut r = a.clone();
    while !r.is_zero() {
        let (dr, lr) = lead_in(&r, v);
        if dr < db {
            break;
        }
        let shift = Monomial::var(a.nvars, v, dr - db);
        let sub = (&lr * b).mul_term(&shift, &BigInt::one());
        r = &(&lb * &r) - &sub;
    }
    r
}

fn primitive_prs(a: IntPoly, b: IntPoly, v: usize) -> IntPoly {
    if coprime_image(&a, &b, v) {
        return IntPoly::one(a.nvars);
    }
    if let Some(g) = heuristic_gcd(&a, &b) {
        return g;
    }
    prs(a, b, v)
}

fn prs(mut a: IntPoly, mut b: IntPoly, v: usize) -> IntPoly {
    if a.degree_in(v) < b.degree_in(v) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if b.is_zero() {
            return a.positive();
        }
        if !b.involves(v) {
            return IntPoly::one(a.nvars);
        }
        let r = pseudo_rem(&a, &b, v);
        a = b;
        b = if r.is_zero() { r } else { split_content(&r, v).1 };
    }
}

/// Evaluation/interpolation gcd at a large integer point, accepted only when
/// the reconstruction divides both inputs.
fn heuristic_gcd(a: &IntPoly, b: &IntPoly) -> Option<IntPoly> {
    let nvars = a.nvars;
    let Some(v) = (0..nvars).rev().find(|&i| a.involves(i) || b.involves(i)) else {
        return Some(IntPoly::constant(nvars, a.constant_term().gcd(&b.constant_term())));
    };
    let (ca, cb) = (a.content(), b.content());
    if !ca.is_one() || !cb.is_one() {
        let g = heuristic_gcd(&a.div_scalar(&ca), &b.div_scalar(&cb))?;
        return Some(g.scale(&ca.gcd(&cb)));
    }
    let height = |f: &IntPoly| f.terms.values().map(|c| c.abs()).max().unwrap_or_default();
    let mut xi = height(a).min(height(b)) * 2 + 29;
    for _ in 0..6 {
        let (ea, eb) = (eval_var(a, v, &xi), eval_var(b, v, &xi));
        if !ea.is_zero() && !eb.is_zero() {
            let gamma = heuristic_gcd(&ea, &eb)?;
            let g = xi_adic(&gamma, v, &xi).primitive();
            if !g.is_zero() && a.exact_div(&g).is_some() && b.exact_div(&g).is_some() {
                return Some(g.positive());
            }
        }
        xi = xi * 73794 / 27011;
    }
    None
}

fn eval_var(f: &IntPoly, v: usize, x: &BigInt) -> IntPoly {
    let mut out = IntPoly::zero(f.nvars);
    for (m, c) in &f.terms {
        let e = m.exponent(v);
        out.add_term(m.set_exponent(v, 0), c * x.pow(e));
    }
    out
}

/// Inverse of `eval_var` through balanced base-`x` digits.
fn xi_adic(gamma: &IntPoly, v: usize, x: &BigInt) -> IntPoly {
    let mut out = IntPoly::zero(gamma.nvars);
    let mut rest = gamma.clone();
    let mut i = 0;
    while !rest.is_zero() {
        let mut digit = IntPoly::zero(gamma.nvars);
        for (m, c) in &rest.terms {
            let mut r = c.mod_floor(x);
            if &r * 2 > *x {
                r -= x;
            }
            digit.add_term(m.clone(), r);
        }
        rest = (&rest - &digit).div_scalar(x);
        for (m, c) in digit.terms {
            out.add_term(m.set_exponent(v, i), c);
        }
        i += 1;
    }
    out
}

const IMAGE_PRIME: u64 = 2_147_483_647;

/// Sufficient test for `gcd(a, b) = 1` when both are primitive in `t_v`:
/// for some evaluation of the other variables mod a prime, the images keep
/// their `t_v`-degrees and are coprime.
fn coprime_image(a: &IntPoly, b: &IntPoly, v: usize) -> bool {
    let q = IMAGE_PRIME;
    let image = |f: &IntPoly, point: &[u64]| -> Vec<u64> {
        let mut out = vec![0u64; f.degree_in(v).map_or(0, |d| d as usize + 1)];
        for (m, c) in &f.terms {
            let mut x = c.mod_floor(&BigInt::from(q)).try_into().unwrap_or(0u64);
            for i in (0..f.nvars).filter(|&i| i != v) {
                x = x * mod_pow(point[i], m.exponent(i), q) % q;
            }
            let slot = &mut out[m.exponent(v) as usize];
            *slot = (*slot + x) % q;
        }
        out
    };
    for attempt in 0..4u64 {
        let point: Vec<u64> = (0..a.nvars as u64).map(|i| 3 + 2 * i + 7919 * attempt * (i + 1)).collect();
        let (ia, ib) = (image(a, &point), image(b, &point));
        if ia.last().map_or(true, |&c| c == 0) || ib.last().map_or(true, |&c| c == 0) {
            continue;
        }
        return ia.len() < 2 || ib.len() < 2 || univariate_gcd_mod(ia, ib, q).len() == 1;
    }
    false
}

fn mod_pow(mut base: u64, mut e: u32, q: u64) -> u64 {
    let mut acc = 1u64;
    base %= q;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % q;
        }
        base = base * base % q;
        e >>= 1;
    }
    acc
}

fn univariate_gcd_mod(mut a: Vec<u64>, mut b: Vec<u64>, q: u64) -> Vec<u64> {
    let trim = |x: &mut Vec<u64>| {
        while x.last() == Some(&0) {
            x.pop();
        }
    };
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let inv = mod_pow(*b.last().unwrap(), (q - 2) as u32, q);
        while a.len() >= b.len() {
            let f = a.last().unwrap() * inv % q;
            let shift = a.len() - b.len();
            for (j, &c) in b.iter().enumerate() {
                a[shift + j] = (a[shift + j] + q - f * c % q) % q;
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}
