//! Weierstrass preparation in one variable and divisibility of truncated
//! power series.

use num_bigint::BigInt;
use num_traits::Zero;

use super::factor::factor;
use super::intpoly::IntPoly;
use super::monomial::Monomial;
use super::padic::Zpn;
use super::series::PolySeries;
use crate::error::{Error, Result};

/// `f = p^mu * unit * distinguished`, with `distinguished` monic of degree
/// `lambda` and all other coefficients divisible by `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassForm {
    pub mu: u32,
    pub lambda: u32,
    pub distinguished: PolySeries,
    pub unit: PolySeries,
    /// `distinguished` and `unit` are determined modulo `p^precision`
    /// (`N - mu`); their stored residues lie in `[0, p^precision)`.
    pub precision: u32,
}

impl WeierstrassForm {
    pub fn reconstruct(&self) -> PolySeries {
        let zn = self.unit.ring().coeffs();
        self.unit
            .try_mul(&self.distinguished)
            .expect("same ring")
            .scale(zn.p_power(self.mu))
    }
}

fn dense(f: &PolySeries) -> Vec<u64> {
    let mut out = Vec::new();
    for (m, c) in f.raw_terms() {
        let e = m.exponents().first().copied().unwrap_or(0) as usize;
        if out.len() <= e {
            out.resize(e + 1, 0);
        }
        out[e] = *c;
    }
    out
}

fn from_dense(template: &PolySeries, coeffs: &[u64]) -> PolySeries {
    let ring = template.ring();
    let mut out = PolySeries::zero(ring);
    for (i, &c) in coeffs.iter().enumerate() {
        let m = if ring.nvars() == 0 {
            Monomial::one(0)
        } else {
            Monomial::var(1, 0, i as u32)
        };
        out.add_term(m, c);
    }
    out
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn mul_mod(zn: &Zpn, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = zn.add(out[i + j], zn.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

/// Weierstrass preparation of a series in one variable.
pub fn weierstrass_prepare(f: &PolySeries) -> Result<WeierstrassForm> {
    let ring = f.ring();
    if ring.nvars() > 1 {
        return Err(Error::BadVariable(
            "Weierstrass preparation is implemented for one variable".into(),
        ));
    }
    let zn = ring.coeffs();
    let mu = f.valuation().ok_or(Error::PrecisionExhausted)?;
    let prec = zn.precision() - mu;
    let low = zn.with_precision(prec)?;
    let shift = zn.p().pow(mu);
    let mut g: Vec<u64> = dense(f).iter().map(|c| (c / shift) % low.modulus()).collect();
    trim(&mut g);
    let lambda = g.iter().position(|&c| low.is_unit(c)).expect("valuation is attained") as u32;
    if lambda == 0 || ring.nvars() == 0 {
        return Ok(WeierstrassForm {
            mu,
            lambda: 0,
            distinguished: PolySeries::one(ring),
            unit: from_dense(f, &g),
            precision: prec,
        });
    }
    let (dist, unit) = hensel_distinguished(&low, &g, lambda as usize);
    Ok(WeierstrassForm {
        mu,
        lambda,
        distinguished: from_dense(f, &dist),
        unit: from_dense(f, &unit),
        precision: prec,
    })
}

/// Weierstrass degree and distinguished polynomial (residues mod `p^N`) of
/// an exact one-variable integer polynomial with `p`-content 0.
pub fn distinguished_of(f: &IntPoly, zn: &Zpn) -> Result<(u32, IntPoly)> {
    if f.nvars() != 1 {
        return Err(Error::BadVariable("expected one variable".into()));
    }
    let deg = f.total_degree().ok_or(Error::PrecisionExhausted)? as usize;
    let mut g = vec![0u64; deg + 1];
    for (m, c) in f.terms() {
        g[m.exponent(0) as usize] = zn.reduce_bigint(c);
    }
    let lambda = g
        .iter()
        .position(|&c| zn.is_unit(c))
        .ok_or_else(|| Error::Invalid("polynomial has positive p-content".into()))?;
    let dist = if lambda == 0 {
        vec![1]
    } else {
        hensel_distinguished(zn, &g, lambda).0
    };
    let poly = IntPoly::from_terms(
        1,
        dist.iter()
            .enumerate()
            .map(|(i, &c)| (Monomial::var(1, 0, i as u32), BigInt::from(c))),
    );
    Ok((lambda as u32, poly))
}

/// Lifts `g ≡ t^lambda * q0 (mod p)` to `g = P * Q` over `Z/p^N` with `P`
/// monic of degree `lambda`, `P ≡ t^lambda (mod p)`.
fn hensel_distinguished(zn: &Zpn, g: &[u64], lambda: usize) -> (Vec<u64>, Vec<u64>) {
    let p = zn.p();
    let fp = Zpn::new(p, 1).expect("prime");
    let q0: Vec<u64> = {
        let mut v: Vec<u64> = g[lambda..].iter().map(|c| c % p).collect();
        trim(&mut v);
        v
    };
    // tau = q0^{-1} mod t^lambda, s = (1 - tau*q0) / t^lambda, all mod p
    let inv0 = fp.inv(q0[0]).expect("unit constant term");
    let mut tau = vec![0u64; lambda];
    for i in 0..lambda {
        let mut acc = if i == 0 { 1 } else { 0 };
        for j in 1..=i {
            let qj = q0.get(j).copied().unwrap_or(0);
            acc = fp.sub(acc, fp.mul(qj, tau[i - j]));
        }
        tau[i] = fp.mul(acc, inv0);
    }
    let tq = mul_mod(&fp, &tau, &q0);
    let mut one_minus = vec![0u64; tq.len().max(1)];
    one_minus[0] = 1;
    for (i, &c) in tq.iter().enumerate() {
        one_minus[i] = fp.sub(one_minus[i], c);
    }
    debug_assert!(one_minus[..lambda.min(one_minus.len())].iter().all(|&c| c == 0));
    let mut s: Vec<u64> = one_minus.get(lambda..).map(|v| v.to_vec()).unwrap_or_default();
    trim(&mut s);

    let mut dist = vec![0u64; lambda + 1];
    dist[lambda] = 1;
    let mut unit = q0.clone();
    let mut pj: u64 = 1;
    for _ in 1..zn.precision() {
        pj *= p;
        let prod = mul_mod(zn, &dist, &unit);
        let len = g.len().max(prod.len());
        let mut e: Vec<u64> = (0..len)
            .map(|i| {
                let diff = zn.sub(g.get(i).copied().unwrap_or(0), prod.get(i).copied().unwrap_or(0));
                debug_assert_eq!(diff % pj, 0);
                (diff / pj) % p
            })
            .collect();
        trim(&mut e);
        if e.is_empty() {
            continue;
        }
        let et = mul_mod(&fp, &e, &tau);
        let a: Vec<u64> = et.iter().take(lambda).copied().collect();
        let quo: Vec<u64> = et.get(lambda..).map(|v| v.to_vec()).unwrap_or_default();
        let b = {
            let x = mul_mod(&fp, &e, &s);
            let y = mul_mod(&fp, &quo, &q0);
            let mut v: Vec<u64> = (0..x.len().max(y.len()))
                .map(|i| fp.add(x.get(i).copied().unwrap_or(0), y.get(i).copied().unwrap_or(0)))
                .collect();
            trim(&mut v);
            v
        };
        for (i, &c) in a.iter().enumerate() {
            dist[i] = zn.add(dist[i], zn.mul(c, pj));
        }
        if unit.len() < b.len() {
            unit.resize(b.len(), 0);
        }
        for (i, &c) in b.iter().enumerate() {
            unit[i] = zn.add(unit[i], zn.mul(c, pj));
        }
    }
    trim(&mut unit);
    (dist, unit)
}

/// Outcome of a divisibility test in the truncated ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Divisibility {
    /// `g = q * f` to working precision, with the witness `q`.
    Divides(PolySeries),
    DoesNotDivide,
}

impl Divisibility {
    pub fn holds(&self) -> bool {
        matches!(self, Divisibility::Divides(_))
    }
}

/// Division of `a` by a monic polynomial `b` over `Z/p^N`.
fn monic_divrem(zn: &Zpn, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let db = b.len() - 1;
    if a.len() <= db {
        return (Vec::new(), a.to_vec());
    }
    let mut r = a.to_vec();
    let mut q = vec![0u64; a.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db];
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                r[i + j] = zn.sub(r[i + j], zn.mul(c, bj));
            }
        }
        q[i] = c;
    }
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

/// Decides whether `f` divides `g`. One variable goes through Weierstrass
/// preparation and division by the distinguished polynomial; several
/// variables go through exact division of the integer representatives after
/// removing the power-series unit factors of `f`.
pub fn series_divides(f: &PolySeries, g: &PolySeries) -> Result<Divisibility> {
    if f.ring() != g.ring() {
        return Err(Error::RingMismatch);
    }
    if f.is_zero() {
        return Err(Error::PrecisionExhausted);
    }
    let ring = f.ring();
    if g.is_zero() {
        return Ok(Divisibility::Divides(PolySeries::zero(ring)));
    }
    if f.is_unit() {
        return Ok(Divisibility::Divides(g.try_mul(&f.inverse()?)?));
    }
    if ring.nvars() <= 1 {
        divides_one_variable(f, g)
    } else {
        divides_lifted(f, g)
    }
}

fn divides_one_variable(f: &PolySeries, g: &PolySeries) -> Result<Divisibility> {
    let ring = f.ring();
    let zn = ring.coeffs();
    let wf = weierstrass_prepare(f)?;
    let wg = weierstrass_prepare(g)?;
    if wf.mu > wg.mu {
        return Ok(Divisibility::DoesNotDivide);
    }
    let low = zn.with_precision(wg.precision)?;
    let reduce = |v: Vec<u64>| -> Vec<u64> {
        let mut w: Vec<u64> = v.into_iter().map(|c| c % low.modulus()).collect();
        trim(&mut w);
        w
    };
    let pf = reduce(dense(&wf.distinguished));
    let pg = reduce(dense(&wg.distinguished));
    let (quo, rem) = monic_divrem(&low, &pg, &pf);
    if !rem.is_empty() {
        // t^D ≡ p^(D / lambda) * (...) modulo the distinguished part of f, so
        // truncation hides remainders divisible by that power of p
        let visible = match wf.lambda {
            0 => wg.precision,
            l => wg.precision.min(ring.degree_cap() / l),
        };
        let hidden = rem.iter().all(|&c| low.valuation(c).map_or(true, |v| v >= visible));
        return if hidden {
            Err(Error::Inconclusive)
        } else {
            Ok(Divisibility::DoesNotDivide)
        };
    }
    let q = from_dense(f, &quo)
        .try_mul(&wg.unit)?
        .try_mul(&wf.unit.inverse()?)?
        .scale(zn.p_power(wg.mu - wf.mu));
    Ok(Divisibility::Divides(q))
}

/// Splits an integer polynomial into its power-series unit part and the
/// remaining part `p^mu * h` (h primitive, a product of non-unit factors).
pub fn unit_split(f: &IntPoly, p: u64) -> (IntPoly, u32, IntPoly) {
    let n = f.nvars();
    let fac = factor(f);
    let content = fac.content.clone();
    let mu = super::intpoly::valuation_big(&content, p);
    let unit_content = &content / BigInt::from(p).pow(mu);
    let mut unit = IntPoly::constant(n, unit_content);
    let mut rest = IntPoly::one(n);
    let pb = BigInt::from(p);
    for (g, e) in &fac.factors {
        let c0 = g.constant_term();
        let power = g.pow(*e);
        if (&c0 % &pb).is_zero() {
            rest = &rest * &power;
        } else {
            unit = &unit * &power;
        }
    }
    (unit, mu, rest)
}

fn divides_lifted(f: &PolySeries, g: &PolySeries) -> Result<Divisibility> {
    let ring = f.ring();
    let zn = ring.coeffs();
    let p = zn.p();
    let (unit_f, mu_f, rest_f) = unit_split(&f.lift(), p);
    let lg = g.lift();
    let mu_g = lg.p_content(p).expect("nonzero");
    if mu_f > mu_g {
        return Ok(Divisibility::DoesNotDivide);
    }
    let shift = BigInt::from(p).pow(mu_g);
    let reduced = lg.div_scalar(&shift);
    let Some(quo) = reduced.exact_div(&rest_f) else {
        return Ok(Divisibility::DoesNotDivide);
    };
    let scale = BigInt::from(p).pow(mu_g - mu_f);
    let q = PolySeries::from_intpoly(ring, &quo.scale(&scale))
        .try_mul(&PolySeries::from_intpoly(ring, &unit_f).inverse()?)?;
    Ok(Divisibility::Divides(q))
}
