//! Factorization over `Z`: squarefree decomposition, Kronecker substitution
//! down to one variable, and Zassenhaus (Cantor-Zassenhaus mod a small prime,
//! Hensel lifting, factor recombination).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::intpoly::{gcd, split_content, IntPoly};
use super::monomial::Monomial;

/// Irreducible factorization: `f = unit_content * prod(g_i^{e_i})` with each
/// `g_i` primitive, irreducible over `Q`, positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub content: BigInt,
    pub factors: Vec<(IntPoly, u32)>,
}

pub fn factor(f: &IntPoly) -> Factorization {
    assert!(!f.is_zero(), "factor of zero");
    let pp = f.primitive();
    let content = f.content() * if f.lead().unwrap().1.is_negative() { -1 } else { 1 };
    let mut factors = Vec::new();
    for (part, mult) in squarefree(&pp) {
        for g in factor_squarefree(&part) {
            factors.push((g, mult));
        }
    }
    factors.sort_by_cached_key(|(g, e)| (g.lead().unwrap().0.clone(), g.to_string(), *e));
    Factorization { content, factors }
}

/// Squarefree decomposition of a primitive polynomial with positive lead.
pub fn squarefree(f: &IntPoly) -> Vec<(IntPoly, u32)> {
    let Some(v) = (0..f.nvars()).rev().find(|&i| f.involves(i)) else {
        return Vec::new();
    };
    let (c, pp) = split_content(f, v);
    let mut out = squarefree(&c);
    out.extend(yun(&pp, v));
    out
}

fn yun(f: &IntPoly, v: usize) -> Vec<(IntPoly, u32)> {
    let mut out = Vec::new();
    let df = f.derivative(v);
    let a0 = gcd(f, &df);
    let mut b = f.exact_div(&a0).expect("gcd divides f");
    let c = df.exact_div(&a0).expect("gcd divides f'");
    let mut d = &c - &b.derivative(v);
    let mut i = 1;
    while b.involves(v) {
        let a = gcd(&b, &d);
        let nb = b.exact_div(&a).expect("yun step");
        let nc = d.exact_div(&a).expect("yun step");
        if a.involves(v) {
            out.push((a.primitive(), i));
        }
        d = &nc - &nb.derivative(v);
        b = nb;
        i += 1;
    }
    out
}

/// Irreducible factors of a squarefree primitive polynomial.
pub fn factor_squarefree(f: &IntPoly) -> Vec<IntPoly> {
    let vars: Vec<usize> = (0..f.nvars()).filter(|&i| f.involves(i)).collect();
    if vars.is_empty() {
        return Vec::new();
    }
    if f.total_degree() == Some(1) {
        return vec![f.primitive()];
    }
    let maxdeg = vars.iter().map(|&i| f.degree_in(i).unwrap()).max().unwrap();
    // shift the variables until the image is squarefree; without a
    // constant term the unshifted image tends to have a repeated root at 0
    let first = if f.constant_term().is_zero() { 1 } else { 0 };
    for attempt in first..64i64 {
        let c: Vec<i64> = (0..f.nvars())
            .map(|i| if attempt == 0 { 0 } else { shift_amount(attempt, i) })
            .collect();
        let back: Vec<i64> = c.iter().map(|x| -x).collect();
        let g = f.shift(&c);
        for base in maxdeg + 1..maxdeg + 6 {
            let kron = Kronecker::new(g.nvars(), vars.clone(), base);
            let big = kron.forward(&g);
            if univariate_squarefree(&big) {
                let facs = zassenhaus(&big, &mut |cand| {
                    // candidate from the univariate image; accept it only when it
                    // is a genuine multivariate factor of what remains
                    let h = kron.backward(cand).primitive();
                    (!h.is_constant()).then_some(h)
                }, &g);
                return facs.iter().map(|h| h.shift(&back).primitive()).collect();
            }
        }
    }
    panic!("no squarefree Kronecker image found for {f}");
}

fn shift_amount(attempt: i64, var: usize) -> i64 {
    let mag = (attempt + 1) / 2 + var as i64;
    if attempt % 2 == 1 { mag } else { -mag }
}

struct Kronecker {
    nvars: usize,
    vars: Vec<usize>,
    base: u32,
}

impl Kronecker {
    fn new(nvars: usize, vars: Vec<usize>, base: u32) -> Self {
        Kronecker { nvars, vars, base }
    }

    fn forward(&self, f: &IntPoly) -> Vec<BigInt> {
        let mut out: Vec<BigInt> = Vec::new();
        for (m, c) in f.terms() {
            let mut e: usize = 0;
            let mut w: usize = 1;
            for &v in &self.vars {
                e += m.exponent(v) as usize * w;
                w *= self.base as usize;
            }
            if out.len() <= e {
                out.resize(e + 1, BigInt::zero());
            }
            out[e] += c;
        }
        trim(&mut out);
        out
    }

    fn backward(&self, g: &[BigInt]) -> IntPoly {
        let mut p = IntPoly::zero(self.nvars);
        for (e, c) in g.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut exps = vec![0u32; self.nvars];
            let mut rest = e;
            for &v in &self.vars {
                exps[v] = (rest % self.base as usize) as u32;
                rest /= self.base as usize;
            }
            if rest != 0 {
                // exponent outside the box: not the image of a factor
                return IntPoly::zero(self.nvars);
            }
            p.add_term(Monomial::from_exponents(exps), c.clone());
        }
        p
    }
}

fn trim<T: Zero>(v: &mut Vec<T>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

// ---------------------------------------------------------------------------
// dense univariate over Z

fn zmul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn zderiv(a: &[BigInt]) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = a.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
    trim(&mut v);
    v
}

/// Certifies squarefreeness through a coprime `gcd(f, f')` modulo a large
/// prime; a `false` may be spurious.
fn univariate_squarefree(f: &[BigInt]) -> bool {
    let df = zderiv(f);
    [1_000_000_007u64, 998_244_353].iter().any(|&q| {
        let fq = Fq(q);
        let (a, b) = (fq.reduce(f), fq.reduce(&df));
        a.len() == f.len() && b.len() == df.len() && fq.gcd(&a, &b).len() == 1
    })
}

fn to_intpoly(f: &[BigInt]) -> IntPoly {
    IntPoly::from_terms(
        1,
        f.iter()
            .enumerate()
            .map(|(i, c)| (Monomial::from_exponents(vec![i as u32]), c.clone())),
    )
}

fn from_intpoly(f: &IntPoly) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); f.degree_in(0).map_or(0, |d| d as usize + 1)];
    for (m, c) in f.terms() {
        out[m.exponent(0) as usize] = c.clone();
    }
    out
}

/// Exact division in `Z[y]`.
fn zdiv_exact(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let db = b.len() - 1;
    if a.len() < b.len() {
        return a.iter().all(|c| c.is_zero()).then(Vec::new);
    }
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    let lb = &b[db];
    for i in (0..q.len()).rev() {
        let (qc, rem) = r[i + db].div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        for (j, bj) in b.iter().enumerate() {
            r[i + j] -= &qc * bj;
        }
        q[i] = qc;
    }
    r.iter().all(|c| c.is_zero()).then_some(q)
}

// ---------------------------------------------------------------------------
// dense univariate over F_q (small odd prime)

#[derive(Clone, Copy)]
struct Fq(u64);

impl Fq {
    fn inv(self, a: u64) -> u64 {
        self.pow(a, self.0 - 2)
    }
    fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        a %= self.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * a % self.0;
            }
            a = a * a % self.0;
            e >>= 1;
        }
        acc
    }
    fn reduce(self, f: &[BigInt]) -> Vec<u64> {
        let q = BigInt::from(self.0);
        let mut v: Vec<u64> = f.iter().map(|c| c.mod_floor(&q).to_u64().unwrap()).collect();
        trim(&mut v);
        v
    }
    fn add(self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut v: Vec<u64> = (0..a.len().max(b.len()))
            .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % self.0)
            .collect();
        trim(&mut v);
        v
    }
    fn sub(self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut v: Vec<u64> = (0..a.len().max(b.len()))
            .map(|i| (a.get(i).copied().unwrap_or(0) + self.0 - b.get(i).copied().unwrap_or(0)) % self.0)
            .collect();
        trim(&mut v);
        v
    }
    fn mul(self, a: &[u64], b: &[u64]) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % self.0;
            }
        }
        trim(&mut out);
        out
    }
    fn divrem(self, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let db = b.len() - 1;
        if a.len() < b.len() {
            return (Vec::new(), a.to_vec());
        }
        let inv = self.inv(b[db]);
        let mut r = a.to_vec();
        let mut q = vec![0u64; a.len() - db];
        for i in (0..q.len()).rev() {
            let c = r[i + db] * inv % self.0;
            if c != 0 {
                for (j, bj) in b.iter().enumerate() {
                    r[i + j] = (r[i + j] + self.0 * self.0 - c * bj) % self.0;
                }
            }
            q[i] = c;
        }
        trim(&mut r);
        trim(&mut q);
        (q, r)
    }
    fn rem(self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.divrem(a, b).1
    }
    fn monic(self, a: &[u64]) -> Vec<u64> {
        let inv = self.inv(*a.last().unwrap());
        a.iter().map(|c| c * inv % self.0).collect()
    }
    fn gcd(self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        if a.is_empty() {
            a
        } else {
            self.monic(&a)
        }
    }
    /// Returns `(g, s, t)` with `s a + t b = g` monic.
    fn xgcd(self, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
        let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
        let (mut s0, mut s1) = (vec![1u64], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = self.divrem(&r0, &r1);
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s2);
            (t0, t1) = (t1, t2);
        }
        let inv = self.inv(*r0.last().unwrap());
        let sc = |v: &[u64]| {
            let mut w: Vec<u64> = v.iter().map(|c| c * inv % self.0).collect();
            trim(&mut w);
            w
        };
        (sc(&r0), sc(&s0), sc(&t0))
    }
    fn deriv(self, a: &[u64]) -> Vec<u64> {
        let mut v: Vec<u64> = a.iter().enumerate().skip(1).map(|(i, c)| c * (i as u64 % self.0) % self.0).collect();
        trim(&mut v);
        v
    }
    /// `base^e mod m` for a big exponent.
    fn powmod(self, base: &[u64], e: &BigUint, m: &[u64]) -> Vec<u64> {
        let mut acc = vec![1u64];
        let b = self.rem(base, m);
        for i in (0..e.bits()).rev() {
            acc = self.rem(&self.mul(&acc, &acc), m);
            if e.bit(i) {
                acc = self.rem(&self.mul(&acc, &b), m);
            }
        }
        acc
    }

    /// Monic irreducible factors of a monic squarefree polynomial.
    fn factor(self, f: &[u64], rng: &mut ChaCha8Rng) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        let mut rest = f.to_vec();
        let x = vec![0u64, 1];
        let mut h = x.clone();
        let q = BigUint::from(self.0);
        let mut i = 1;
        while rest.len() > 1 && 2 * i <= rest.len() - 1 {
            h = self.powmod(&h, &q, &rest);
            let g = self.gcd(&self.sub(&h, &x), &rest);
            if g.len() > 1 {
                self.split_equal_degree(&g, i, rng, &mut out);
                rest = self.divrem(&rest, &g).0;
                h = self.rem(&h, &rest);
            }
            i += 1;
        }
        if rest.len() > 1 {
            out.push(self.monic(&rest));
        }
        out.sort();
        out
    }

    fn split_equal_degree(self, g: &[u64], d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Vec<u64>>) {
        let n = g.len() - 1;
        if n == d {
            out.push(g.to_vec());
            return;
        }
        let e = (BigUint::from(self.0).pow(d as u32) - 1u32) / 2u32;
        loop {
            let mut a: Vec<u64> = (0..n).map(|_| rng.gen_range(0..self.0)).collect();
            trim(&mut a);
            if a.len() < 2 {
                continue;
            }
            let b = self.sub(&self.powmod(&a, &e, g), &[1]);
            let c = self.gcd(&b, g);
            if c.len() > 1 && c.len() < g.len() {
                let other = self.divrem(g, &c).0;
                self.split_equal_degree(&c, d, rng, out);
                self.split_equal_degree(&self.monic(&other), d, rng, out);
                return;
            }
        }
    }
}

const SMALL_PRIMES: [u64; 30] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101,
    103, 107, 109, 113, 127,
];

/// Hensel lifting of `a ≡ g0 * h0 (mod q)` to `a ≡ g * h (mod q^k)`, `g0` monic.
/// Coefficients of `a` are residues mod `q^k`.
fn hensel_pair(
    fq: Fq,
    a: &[BigInt],
    g0: &[u64],
    h0: &[u64],
    k: u32,
) -> (Vec<BigInt>, Vec<BigInt>) {
    let q = BigInt::from(fq.0);
    let (one, s, t) = fq.xgcd(g0, h0);
    debug_assert_eq!(one, vec![1]);
    let lift = |v: &[u64]| v.iter().map(|&c| BigInt::from(c)).collect::<Vec<BigInt>>();
    let mut g = lift(g0);
    let mut h = lift(h0);
    let mut qj = q.clone();
    for _ in 1..k {
        let qn = &qj * &q;
        let gh = zmul(&g, &h);
        let diff: Vec<BigInt> = (0..a.len().max(gh.len()))
            .map(|i| {
                let x = a.get(i).cloned().unwrap_or_default() - gh.get(i).cloned().unwrap_or_default();
                x.mod_floor(&qn) / &qj
            })
            .collect();
        let e = fq.reduce(&diff);
        let et = fq.mul(&e, &t);
        let (quo, arem) = fq.divrem(&et, g0);
        let b = fq.add(&fq.mul(&e, &s), &fq.mul(&quo, h0));
        for (i, c) in arem.iter().enumerate() {
            g[i] = (&g[i] + &qj * BigInt::from(*c)).mod_floor(&qn);
        }
        if h.len() < b.len() {
            h.resize(b.len(), BigInt::zero());
        }
        for (i, c) in b.iter().enumerate() {
            h[i] = (&h[i] + &qj * BigInt::from(*c)).mod_floor(&qn);
        }
        for c in h.iter_mut().skip(b.len()) {
            *c = c.mod_floor(&qn);
        }
        qj = qn;
    }
    (g, h)
}

fn hensel_multi(fq: Fq, a: &[BigInt], factors: &[Vec<u64>], k: u32) -> Vec<Vec<BigInt>> {
    let modulus = BigInt::from(fq.0).pow(k);
    if factors.len() == 1 {
        let lc = a.last().unwrap();
        let inv = mod_inverse(lc, &modulus);
        return vec![a.iter().map(|c| (c * &inv).mod_floor(&modulus)).collect()];
    }
    let lc = fq.reduce(&[a.last().unwrap().clone()]);
    let mut h0 = lc;
    for f in &factors[1..] {
        h0 = fq.mul(&h0, f);
    }
    let (g, h) = hensel_pair(fq, a, &factors[0], &h0, k);
    let mut out = vec![g];
    out.extend(hensel_multi(fq, &h, &factors[1..], k));
    out
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one(), "leading coefficient not invertible");
    e.x.mod_floor(m)
}

fn symmetric(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Zassenhaus for a squarefree univariate `big`; `accept` maps a primitive
/// univariate candidate to the factor it stands for, and `whole` is the
/// polynomial whose factors are sought.
fn zassenhaus(
    big: &[BigInt],
    accept: &mut dyn FnMut(&[BigInt]) -> Option<IntPoly>,
    whole: &IntPoly,
) -> Vec<IntPoly> {
    let n = big.len() - 1;
    let lc = big.last().unwrap().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut best: Option<(Fq, Vec<Vec<u64>>)> = None;
    let mut tried = 0;
    for &q in &SMALL_PRIMES {
        if (&lc % BigInt::from(q)).is_zero() {
            continue;
        }
        let fq = Fq(q);
        let fm = fq.reduce(big);
        if fm.len() != big.len() || fq.gcd(&fm, &fq.deriv(&fm)).len() > 1 {
            continue;
        }
        let facs = fq.factor(&fq.monic(&fm), &mut rng);
        if best.as_ref().map_or(true, |(_, b)| facs.len() < b.len()) {
            best = Some((fq, facs));
        }
        tried += 1;
        if tried == 4 {
            break;
        }
    }
    let (fq, modular) = best.expect("a good reduction prime exists");
    if modular.len() == 1 {
        return vec![whole.primitive()];
    }

    // Mignotte-style bound on coefficients of any factor, times |lc|
    let norm2: BigInt = big.iter().map(|c| c * c).sum();
    let bound = (BigInt::one() << (n + 1)) * (norm2.sqrt() + 1) * lc.abs() * 2;
    let mut k = 1;
    let q = BigInt::from(fq.0);
    let mut qk = q.clone();
    while qk <= bound {
        qk *= &q;
        k += 1;
    }
    let residues: Vec<BigInt> = big.iter().map(|c| c.mod_floor(&qk)).collect();
    let lifted = hensel_multi(fq, &residues, &modular, k);

    let mut remaining: Vec<usize> = (0..lifted.len()).collect();
    let mut current = big.to_vec();
    let mut rest = whole.clone();
    let mut found = Vec::new();
    let mut size = 1;
    'outer: while 2 * size <= remaining.len() {
        let lcur = current.last().unwrap().clone();
        for subset in combinations(&remaining, size) {
            let mut g: Vec<BigInt> = vec![lcur.clone()];
            for &i in &subset {
                g = zmul(&g, &lifted[i]).into_iter().map(|c| c.mod_floor(&qk)).collect();
            }
            let g: Vec<BigInt> = g.iter().map(|c| symmetric(c, &qk)).collect();
            let gp = from_intpoly(&to_intpoly(&g).primitive());
            if gp.len() < 2 {
                continue;
            }
            if !current[0].is_zero() && !(&current[0] % &gp[0]).is_zero() {
                continue;
            }
            let Some(cofactor) = zdiv_exact(&current, &gp) else {
                continue;
            };
            let Some(h) = accept(&gp) else {
                continue;
            };
            let Some(r) = rest.exact_div(&h) else {
                continue;
            };
            found.push(h);
            rest = r;
            current = cofactor;
            remaining.retain(|i| !subset.contains(i));
            continue 'outer;
        }
        size += 1;
    }
    if !rest.is_constant() {
        found.push(rest.primitive());
    }
    found
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(n: usize, terms: &[(&[u32], i64)]) -> IntPoly {
        IntPoly::from_terms(
            n,
            terms
                .iter()
                .map(|(e, c)| (Monomial::from_exponents(e.to_vec()), BigInt::from(*c))),
        )
    }

    fn product(f: &Factorization) -> IntPoly {
        let mut acc = IntPoly::constant(f.factors.first().map_or(1, |g| g.0.nvars()), f.content.clone());
        for (g, e) in &f.factors {
            acc = &acc * &g.pow(*e);
        }
        acc
    }

    #[test]
    fn combinations_enumerate() {
        assert_eq!(combinations(&[0, 1, 2], 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(combinations(&[4, 5], 1), vec![vec![4], vec![5]]);
        assert_eq!(combinations(&[4, 5], 2), vec![vec![4, 5]]);
    }

    #[test]
    fn univariate_factorization() {
        // (t + 5)^2 (t^2 + 1)(3t - 7)
        let a = poly(1, &[(&[1], 1), (&[0], 5)]);
        let b = poly(1, &[(&[2], 1), (&[0], 1)]);
        let c = poly(1, &[(&[1], 3), (&[0], -7)]);
        let f = &(&a.pow(2) * &b) * &c.scale(&BigInt::from(-2));
        let fac = factor(&f);
        assert_eq!(product(&fac), f);
        assert_eq!(fac.factors.len(), 3);
        assert!(fac.factors.contains(&(a, 2)));
    }

    #[test]
    fn swinnerton_dyer_like_irreducible() {
        // x^4 - 10x^2 + 1 splits mod every prime but is irreducible over Z
        let f = poly(1, &[(&[4], 1), (&[2], -10), (&[0], 1)]);
        let fac = factor(&f);
        assert_eq!(fac.factors, vec![(f, 1)]);
    }

    #[test]
    fn bivariate_factorization() {
        let s = IntPoly::var(2, 0);
        let t = IntPoly::var(2, 1);
        let one = IntPoly::one(2);
        let u = &one + &s; // a unit in Z_p[[s,t]]
        let g = &(&s + &t) + &IntPoly::constant(2, 25);
        let h = &(&s * &t) - &IntPoly::constant(2, 5);
        let f = &(&u * &g.pow(2)) * &h;
        let fac = factor(&f);
        assert_eq!(product(&fac), f);
        let mut got: Vec<_> = fac.factors.clone();
        got.sort_by_key(|(g, _)| g.to_string());
        let mut want = vec![(u, 1), (g, 2), (h, 1)];
        want.sort_by_key(|(g, _)| g.to_string());
        assert_eq!(got, want);
    }

    #[test]
    fn kronecker_spurious_factors_rejected() {
        // irreducible, but its Kronecker image may split
        let f = poly(2, &[(&[2, 0], 1), (&[0, 1], 1), (&[1, 1], 1), (&[0, 0], 3)]);
        let fac = factor(&f);
        assert_eq!(fac.factors, vec![(f, 1)]);
    }

    #[test]
    fn zero_constant_term_needs_shift() {
        let s = IntPoly::var(2, 0);
        let t = IntPoly::var(2, 1);
        let a = &s.scale(&BigInt::from(3)) + &t.scale(&BigInt::from(2));
        let b = &(&s.pow(2) + &(&s * &t)) - &t.scale(&BigInt::from(4));
        let f = &(&a * &b) * &(&s - &t);
        let fac = factor(&f);
        assert_eq!(product(&fac), f);
        assert_eq!(fac.factors.len(), 3);
        let f = crate::arith::parse::parse_poly(
            &crate::arith::RingDescriptor::new(3, 4, vec!["t1".into(), "t2".into()], 12).unwrap(),
            "9*t1^4 + 12*t1^3*t2 - 8*t1*t2^3 - 4*t2^4 - 18*t1^3 - 15*t1^2*t2 + 3*t1*t2^2 - 3*t2^3 + 9*t1^2 + 9*t1*t2 - 12*t2^2",
        )
        .unwrap();
        let fac = factor(&f);
        assert_eq!(product(&fac), f);
    }
}
