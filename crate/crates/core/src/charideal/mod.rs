//! Characteristic ideals as divisors: the gcd of the maximal minors of a
//! presentation, with power-series units removed.

mod linalg;

pub use linalg::{determinant, rank};

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::factor::factor;
use crate::arith::intpoly::{gcd, valuation_big, IntPoly};
use crate::arith::ring::RingDescriptor;
use crate::arith::weierstrass::distinguished_of;
use crate::error::{Error, Result};
use crate::modules::PresentedModule;

/// `p^mu * poly_part`, or the zero ideal.
#[derive(Clone, Debug)]
pub struct CharDivisor {
    ring: RingDescriptor,
    is_zero: bool,
    mu: u32,
    poly_part: IntPoly,
    factors: Vec<(IntPoly, u32)>,
    distinguished: Option<IntPoly>,
}

impl PartialEq for CharDivisor {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring
            && self.is_zero == other.is_zero
            && self.mu == other.mu
            && self.poly_part == other.poly_part
    }
}

impl Eq for CharDivisor {}

impl CharDivisor {
    pub fn one(ring: &RingDescriptor) -> Self {
        CharDivisor {
            ring: ring.clone(),
            is_zero: false,
            mu: 0,
            poly_part: IntPoly::one(ring.nvars()),
            factors: Vec::new(),
            distinguished: (ring.nvars() == 1).then(|| IntPoly::one(1)),
        }
    }

    pub fn zero(ring: &RingDescriptor) -> Self {
        CharDivisor {
            is_zero: true,
            distinguished: None,
            ..Self::one(ring)
        }
    }

    /// The divisor of the principal ideal `(f)`.
    pub fn from_generator(ring: &RingDescriptor, f: &IntPoly) -> Result<Self> {
        if f.nvars() != ring.nvars() {
            return Err(Error::RingMismatch);
        }
        if f.is_zero() {
            return Ok(Self::zero(ring));
        }
        let p = ring.p();
        let mu = valuation_big(&f.content(), p);
        let prim = f.primitive();
        let pb = BigInt::from(p);
        let mut factors = Vec::new();
        if (prim.constant_term() % &pb).is_zero() {
            for (g, e) in factor(&prim).factors {
                if (g.constant_term() % &pb).is_zero() {
                    factors.push((g, e));
                }
            }
        }
        Self::from_parts(ring, mu, factors)
    }

    fn from_parts(ring: &RingDescriptor, mu: u32, factors: Vec<(IntPoly, u32)>) -> Result<Self> {
        let mut poly_part = IntPoly::one(ring.nvars());
        for (g, e) in &factors {
            poly_part = &poly_part * &g.pow(*e);
        }
        let poly_part = poly_part.positive();
        let distinguished = if ring.nvars() == 1 {
            Some(distinguished_of(&poly_part, &ring.coeffs())?.1)
        } else {
            None
        };
        Ok(CharDivisor {
            ring: ring.clone(),
            is_zero: false,
            mu,
            poly_part,
            factors,
            distinguished,
        })
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.is_zero
    }

    /// `Ch = (1)`.
    pub fn is_one(&self) -> bool {
        !self.is_zero && self.mu == 0 && self.poly_part.is_one()
    }

    pub fn mu(&self) -> u32 {
        self.mu
    }

    pub fn poly_part(&self) -> &IntPoly {
        &self.poly_part
    }

    /// Irreducible non-unit factors of `poly_part` with multiplicities.
    pub fn factors(&self) -> &[(IntPoly, u32)] {
        &self.factors
    }

    /// For one variable: the distinguished polynomial with the same divisor
    /// as `poly_part`, coefficients mod `p^N`.
    pub fn distinguished(&self) -> Option<&IntPoly> {
        self.distinguished.as_ref()
    }

    /// `p^mu * poly_part`.
    pub fn generator(&self) -> IntPoly {
        if self.is_zero {
            return IntPoly::zero(self.ring.nvars());
        }
        self.poly_part.scale(&BigInt::from(self.ring.p()).pow(self.mu))
    }

    /// Exponent of the prime ideal `(h)` in the divisor; `h` is `p` when it
    /// is the constant `p`.
    pub fn length_at(&self, h: &IntPoly) -> Result<u32> {
        if self.is_zero {
            return Err(Error::NonTorsion);
        }
        if h.is_constant() && h.constant_term() == BigInt::from(self.ring.p()) {
            return Ok(self.mu);
        }
        let hp = h.primitive();
        Ok(self.factors.iter().find(|(g, _)| *g == hp).map_or(0, |(_, e)| *e))
    }

    pub fn render(&self) -> String {
        if self.is_zero {
            return "0".into();
        }
        format!("p^{} * ({})", self.mu, self.poly_part.render(self.ring.vars()))
    }

    pub fn summary(&self) -> DivisorSummary {
        DivisorSummary {
            vars: self.ring.vars().to_vec(),
            is_zero: self.is_zero,
            mu: self.mu,
            poly_part: self.poly_part.render(self.ring.vars()),
            distinguished: self.distinguished.as_ref().map(|d| d.render(self.ring.vars())),
            factors: self
                .factors
                .iter()
                .map(|(g, e)| (g.render(self.ring.vars()), *e))
                .collect(),
            rendered: self.render(),
        }
    }
}

impl std::fmt::Display for CharDivisor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render())
    }
}

/// Serializable view of a divisor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorSummary {
    pub vars: Vec<String>,
    pub is_zero: bool,
    pub mu: u32,
    pub poly_part: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distinguished: Option<String>,
    pub factors: Vec<(String, u32)>,
    pub rendered: String,
}

fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=m - (k - cur.len()) {
            cur.push(i);
            go(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= m {
        go(0, m, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Nonzero maximal minors of the relation matrix, in column-subset order.
pub fn maximal_minors(m: &PresentedModule) -> Vec<IntPoly> {
    let k = m.generators();
    let cols = m.relations();
    subsets(cols.len(), k)
        .par_iter()
        .map(|s| {
            let rows: Vec<Vec<IntPoly>> = (0..k).map(|i| s.iter().map(|&j| cols[j][i].clone()).collect()).collect();
            determinant(rows)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .filter(|d| !d.is_zero())
        .collect()
}

/// Whether the module has rank 0, i.e. the relation matrix has full row
/// rank over the fraction field.
pub fn is_torsion(m: &PresentedModule) -> bool {
    let rows = m.rows();
    rank(rows) == m.generators()
}

/// Rank of the module over the fraction field.
pub fn module_rank(m: &PresentedModule) -> usize {
    m.generators() - rank(m.rows())
}

/// `Ch(M)`: zero for non-torsion modules, otherwise the divisor of the gcd
/// of the maximal minors.
pub fn char_ideal(m: &PresentedModule) -> Result<CharDivisor> {
    let ring = m.ring();
    let m = m.prune();
    let k = m.generators();
    if k == 0 {
        return Ok(CharDivisor::one(ring));
    }
    if m.relation_count() < k || !is_torsion(&m) {
        return Ok(CharDivisor::zero(ring));
    }
    let minors = maximal_minors(&m);
    let p = ring.p();
    let mu = minors
        .iter()
        .map(|d| valuation_big(&d.content(), p))
        .min()
        .expect("torsion module has a nonzero minor");
    let mut g = IntPoly::zero(ring.nvars());
    for d in &minors {
        g = gcd(&g, &d.primitive());
        if g.is_one() {
            break;
        }
    }
    for d in &minors {
        if d.exact_div(&g).is_none() {
            return Err(Error::Invalid("gcd certificate failed".into()));
        }
    }
    let pmu = BigInt::from(p).pow(mu);
    CharDivisor::from_generator(ring, &g.scale(&pmu))
}

pub fn is_pseudo_null(m: &PresentedModule) -> Result<bool> {
    Ok(char_ideal(m)?.is_one())
}

/// `(mu, lambda)` of a torsion module over `Z_p[[t]]`.
pub fn mu_lambda(m: &PresentedModule) -> Result<(u32, u32)> {
    if m.ring().nvars() != 1 {
        return Err(Error::BadVariable("mu and lambda need exactly one variable".into()));
    }
    let ch = char_ideal(m)?;
    if ch.is_zero() {
        return Err(Error::NonTorsion);
    }
    Ok(divisor_mu_lambda(&ch))
}

pub fn divisor_mu_lambda(ch: &CharDivisor) -> (u32, u32) {
    let lambda = ch
        .distinguished
        .as_ref()
        .and_then(IntPoly::total_degree)
        .unwrap_or(0);
    (ch.mu, lambda)
}

fn same_ring(a: &CharDivisor, b: &CharDivisor) -> Result<()> {
    if a.ring != b.ring {
        return Err(Error::RingMismatch);
    }
    Ok(())
}

pub fn divisor_mul(a: &CharDivisor, b: &CharDivisor) -> Result<CharDivisor> {
    same_ring(a, b)?;
    if a.is_zero || b.is_zero {
        return Ok(CharDivisor::zero(&a.ring));
    }
    let mut factors = a.factors.clone();
    for (g, e) in &b.factors {
        match factors.iter_mut().find(|(h, _)| h == g) {
            Some(entry) => entry.1 += e,
            None => factors.push((g.clone(), *e)),
        }
    }
    factors.sort_by_cached_key(|(g, e)| (g.lead().unwrap().0.clone(), g.to_string(), *e));
    CharDivisor::from_parts(&a.ring, a.mu + b.mu, factors)
}

/// Whether `a` divides `b`, i.e. the ideal `b` is contained in `a`.
pub fn divisor_divides(a: &CharDivisor, b: &CharDivisor) -> Result<bool> {
    same_ring(a, b)?;
    if b.is_zero {
        return Ok(true);
    }
    if a.is_zero {
        return Ok(false);
    }
    Ok(a.mu <= b.mu && b.poly_part.exact_div(&a.poly_part).is_some())
}

/// Image of the divisor under `t_k -> 0`.
pub fn project_divisor(x: &CharDivisor, k: usize) -> Result<CharDivisor> {
    let d = x.ring.nvars();
    if d == 0 || k != d - 1 {
        return Err(Error::BadVariable(format!("projection must drop the last variable, got index {k}")));
    }
    let sub = x.ring.without_var(k)?;
    if x.is_zero {
        return Ok(CharDivisor::zero(&sub));
    }
    let img = x.generator().project(k);
    CharDivisor::from_generator(&sub, &img)
}

/// Normalizes a divisor again from its generator.
pub fn renormalize(x: &CharDivisor) -> Result<CharDivisor> {
    CharDivisor::from_generator(&x.ring, &x.generator())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse::parse_poly;

    fn b(p: u64) -> RingDescriptor {
        RingDescriptor::new(p, 6, vec!["s".into(), "t".into()], 12).unwrap()
    }

    fn l1(p: u64) -> RingDescriptor {
        RingDescriptor::new(p, 6, vec!["t".into()], 12).unwrap()
    }

    fn poly(r: &RingDescriptor, s: &str) -> IntPoly {
        parse_poly(r, s).unwrap()
    }

    fn cyclic(r: &RingDescriptor, rels: &[&str]) -> PresentedModule {
        PresentedModule::cyclic(r, rels.iter().map(|s| poly(r, s)).collect()).unwrap()
    }

    #[test]
    fn principal_examples() {
        let r = l1(5);
        let ch = char_ideal(&cyclic(&r, &["5*t"])).unwrap();
        assert_eq!((ch.mu(), ch.poly_part().clone()), (1, poly(&r, "t")));
        assert_eq!(mu_lambda(&cyclic(&r, &["5*t"])).unwrap(), (1, 1));
        assert_eq!(mu_lambda(&cyclic(&r, &["t^2 + 5*t + 125"])).unwrap(), (0, 2));
        assert_eq!(char_ideal(&cyclic(&r, &["t^2 + 5*t + 125"])).unwrap().render(), "p^0 * (t^2 + 5*t + 125)");

        let rb = b(5);
        let ch = char_ideal(&cyclic(&rb, &["25 + s + t"])).unwrap();
        assert_eq!(ch.render(), "p^0 * (s + t + 25)");
        assert!(char_ideal(&cyclic(&rb, &["5", "s"])).unwrap().is_one());
    }

    #[test]
    fn unit_factor_is_stripped() {
        let r = l1(5);
        let m = PresentedModule::new(
            &r,
            2,
            vec![vec![poly(&r, "t + 5"), poly(&r, "0")], vec![poly(&r, "0"), poly(&r, "(t+5)*(1+t)")]],
        )
        .unwrap();
        let ch = char_ideal(&m).unwrap();
        assert_eq!(ch.mu(), 0);
        assert_eq!(ch.poly_part(), &poly(&r, "(t+5)^2"));
        let m = PresentedModule::new(&r, 2, vec![vec![poly(&r, "25"), poly(&r, "0")], vec![poly(&r, "0"), poly(&r, "t + 5")]]).unwrap();
        assert_eq!(mu_lambda(&m).unwrap(), (2, 1));
    }

    #[test]
    fn non_torsion_and_zero() {
        let r = b(3);
        assert!(char_ideal(&PresentedModule::free(&r, 1)).unwrap().is_zero());
        let m = PresentedModule::new(&r, 2, vec![vec![poly(&r, "s"), poly(&r, "t")]]).unwrap();
        assert!(char_ideal(&m).unwrap().is_zero());
        let m = PresentedModule::new(
            &r,
            2,
            vec![vec![poly(&r, "s"), poly(&r, "t")], vec![poly(&r, "s^2"), poly(&r, "s*t")]],
        )
        .unwrap();
        assert!(!is_torsion(&m));
        assert!(char_ideal(&m).unwrap().is_zero());
        assert!(is_pseudo_null(&PresentedModule::zero(&r)).unwrap());
        assert_eq!(mu_lambda(&PresentedModule::free(&l1(3), 1)), Err(Error::NonTorsion));
    }

    #[test]
    fn divisor_algebra() {
        let r = b(5);
        let a = r.subring().unwrap();
        assert!(char_ideal(&cyclic(&r, &["5", "s*t"])).unwrap().is_one());
        let p_div = CharDivisor::from_generator(&r, &poly(&r, "5")).unwrap();
        let s_div = CharDivisor::from_generator(&r, &poly(&r, "s")).unwrap();
        let prod = divisor_mul(&p_div, &s_div).unwrap();
        assert_eq!(prod, CharDivisor::from_generator(&r, &poly(&r, "5*s")).unwrap());
        assert_eq!(divisor_mul(&CharDivisor::one(&r), &prod).unwrap(), prod);

        let x = CharDivisor::from_generator(&a, &poly(&a, "25 + s")).unwrap();
        assert!(divisor_divides(&x, &x).unwrap());
        assert!(!divisor_divides(&x, &CharDivisor::from_generator(&a, &poly(&a, "s")).unwrap()).unwrap());

        let big = CharDivisor::from_generator(&r, &poly(&r, "25 + s + t")).unwrap();
        assert_eq!(project_divisor(&big, 1).unwrap(), x);
        assert!(project_divisor(&CharDivisor::from_generator(&r, &poly(&r, "t")).unwrap(), 1).unwrap().is_zero());
        assert!(project_divisor(&CharDivisor::one(&r), 1).unwrap().is_one());
        assert_eq!(divisor_mul(&x, &CharDivisor::one(&r)), Err(Error::RingMismatch));
    }

    #[test]
    fn length_at_primes() {
        let r = l1(3);
        let ch = CharDivisor::from_generator(&r, &poly(&r, "9*(t+3)^2*(t^2+3)")).unwrap();
        assert_eq!(ch.length_at(&poly(&r, "3")).unwrap(), 2);
        assert_eq!(ch.length_at(&poly(&r, "t + 3")).unwrap(), 2);
        assert_eq!(ch.length_at(&poly(&r, "t^2 + 3")).unwrap(), 1);
        assert_eq!(ch.length_at(&poly(&r, "t")).unwrap(), 0);
        assert_eq!(divisor_mu_lambda(&ch), (2, 4));
    }
}
