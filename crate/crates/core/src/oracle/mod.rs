//! Brute-force orders of finite quotients `M / (p^m, t1^n1, ..., td^nd)`
//! and growth fits of `(mu, lambda)` from them.
//!
//! Nothing here touches the gcd or Weierstrass code: a quotient is the
//! cokernel of an explicit integer matrix, reduced by elimination with
//! minimal-valuation pivots.

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::intpoly::IntPoly;
use crate::charideal::is_torsion;
use crate::error::{Error, Result};
use crate::modules::PresentedModule;

pub const DEFAULT_SIZE_LIMIT: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteQuotientSpec {
    pub m: u32,
    pub n: Vec<u32>,
}

impl FiniteQuotientSpec {
    pub fn new(m: u32, n: Vec<u32>) -> Self {
        FiniteQuotientSpec { m, n }
    }

    fn validate(&self, module: &PresentedModule) -> Result<()> {
        let r = module.ring();
        if self.n.len() != r.nvars() {
            return Err(Error::Invalid(format!(
                "{} truncation degrees for {} variables",
                self.n.len(),
                r.nvars()
            )));
        }
        if self.m == 0 || self.n.contains(&0) {
            return Err(Error::Invalid("truncation exponents must be positive".into()));
        }
        if self.m > r.precision() || self.n.iter().any(|&n| n > r.degree_cap()) {
            return Err(Error::Invalid(format!(
                "quotient (m = {}, n = {:?}) exceeds the working precision N = {}, D = {}",
                self.m,
                self.n,
                r.precision(),
                r.degree_cap()
            )));
        }
        Ok(())
    }
}

/// `e` with `|M / (p^m, t^n)| = p^e`.
pub fn finite_quotient_order(module: &PresentedModule, q: &FiniteQuotientSpec) -> Result<u32> {
    finite_quotient_order_with_limit(module, q, DEFAULT_SIZE_LIMIT)
}

pub fn finite_quotient_order_with_limit(module: &PresentedModule, q: &FiniteQuotientSpec, limit: usize) -> Result<u32> {
    q.validate(module)?;
    let boxed = MonomialBox::new(&q.n);
    let k = module.generators();
    let rows = k * boxed.size;
    if rows > limit {
        return Err(Error::SizeLimit(rows, limit));
    }
    if rows == 0 {
        return Ok(0);
    }
    let p = module.ring().p();
    let modulus = (p as u128).pow(q.m);
    let big_mod = BigInt::from(modulus);
    let mut mat: Vec<Vec<u128>> = vec![Vec::new(); rows];
    for col in module.relations() {
        let entries: Vec<Vec<(Vec<u32>, u128)>> = col
            .iter()
            .map(|f| reduced_terms(f, &big_mod))
            .collect();
        for shift in 0..boxed.size {
            let a = boxed.exponents(shift);
            let mut column = vec![0u128; rows];
            let mut nonzero = false;
            for (g, terms) in entries.iter().enumerate() {
                for (e, c) in terms {
                    let s: Vec<u32> = a.iter().zip(e).map(|(x, y)| x + y).collect();
                    if let Some(idx) = boxed.index(&s) {
                        let slot = &mut column[g * boxed.size + idx];
                        *slot = (*slot + c) % modulus;
                        nonzero = true;
                    }
                }
            }
            if nonzero {
                for (r, v) in column.into_iter().enumerate() {
                    mat[r].push(v);
                }
            }
        }
    }
    Ok(cokernel_exponent(mat, p, q.m))
}

fn reduced_terms(f: &IntPoly, modulus: &BigInt) -> Vec<(Vec<u32>, u128)> {
    f.terms()
        .filter_map(|(mono, c)| {
            let r: u128 = c.mod_floor(modulus).try_into().expect("residue fits");
            (r != 0).then(|| (mono.exponents().to_vec(), r))
        })
        .collect()
}

struct MonomialBox {
    n: Vec<u32>,
    size: usize,
}

impl MonomialBox {
    fn new(n: &[u32]) -> Self {
        MonomialBox {
            n: n.to_vec(),
            size: n.iter().map(|&x| x as usize).product(),
        }
    }

    fn exponents(&self, mut idx: usize) -> Vec<u32> {
        self.n
            .iter()
            .map(|&b| {
                let e = idx % b as usize;
                idx /= b as usize;
                e as u32
            })
            .collect()
    }

    fn index(&self, e: &[u32]) -> Option<usize> {
        let mut idx = 0;
        let mut w = 1;
        for (&x, &b) in e.iter().zip(&self.n) {
            if x >= b {
                return None;
            }
            idx += x as usize * w;
            w *= b as usize;
        }
        Some(idx)
    }
}

fn valuation(x: u128, p: u64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let (mut x, mut v) = (x, 0);
    while x % p as u128 == 0 {
        x /= p as u128;
        v += 1;
    }
    v.min(cap)
}

fn inverse_mod(a: u128, modulus: u128) -> u128 {
    let (mut r0, mut r1) = (modulus as i128, a as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(modulus as i128) as u128
}

fn mul_mod(a: u128, b: u128, modulus: u128) -> u128 {
    // modulus < 2^64 keeps the product in range
    a * b % modulus
}

/// `log_p` of the order of the cokernel of `mat` over `Z/p^m`.
fn cokernel_exponent(mut mat: Vec<Vec<u128>>, p: u64, m: u32) -> u32 {
    let modulus = (p as u128).pow(m);
    let nrows = mat.len();
    let ncols = mat.first().map_or(0, Vec::len);
    let mut row_done = vec![false; nrows];
    let mut col_done = vec![false; ncols];
    let mut total = nrows as u32 * m;
    loop {
        let mut best: Option<(u32, usize, usize)> = None;
        'search: for (i, row) in mat.iter().enumerate() {
            if row_done[i] {
                continue;
            }
            for (j, &x) in row.iter().enumerate() {
                if col_done[j] || x == 0 {
                    continue;
                }
                let v = valuation(x, p, m);
                if best.map_or(true, |(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                    if v == 0 {
                        break 'search;
                    }
                }
            }
        }
        let Some((v, pi, pj)) = best else { break };
        total -= m - v;
        let pv = (p as u128).pow(v);
        let unit_inv = inverse_mod(mat[pi][pj] / pv, modulus);
        let pivot_row = mat[pi].clone();
        for (i, row) in mat.iter_mut().enumerate() {
            if i == pi || row_done[i] || row[pj] == 0 {
                continue;
            }
            let f = mul_mod(row[pj] / pv, unit_inv, modulus);
            for (j, x) in row.iter_mut().enumerate() {
                if !col_done[j] && pivot_row[j] != 0 {
                    *x = (*x + modulus - mul_mod(f, pivot_row[j], modulus)) % modulus;
                }
            }
        }
        row_done[pi] = true;
        col_done[pj] = true;
    }
    total
}

/// Evaluation grid: `m` runs over `ms` and `n` over `lambda_c * m + o` for
/// `o` in `offsets`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FitGrid {
    pub ms: Vec<u32>,
    pub offsets: Vec<u32>,
}

impl Default for FitGrid {
    fn default() -> Self {
        FitGrid {
            ms: vec![2, 3, 4],
            offsets: vec![2, 4],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowthFit {
    pub mu: u32,
    pub lambda: u32,
    /// `e - lambda*m - mu*n`, constant on a stable fit.
    pub constant: i64,
    /// `(m, n, e, residual)` on every grid point.
    pub points: Vec<(u32, u32, u32, i64)>,
    pub lambda_candidate: u32,
    pub m_shift: u32,
}

pub fn fit_mu_lambda(module: &PresentedModule) -> Result<(u32, u32)> {
    let fit = fit_growth(module, &FitGrid::default())?;
    Ok((fit.mu, fit.lambda))
}

const MAX_PROBE: u32 = 64;

/// Fits `e(m, n) = lambda*m + mu*n + c` over `Z_p[[t]]`.
pub fn fit_growth(module: &PresentedModule, grid: &FitGrid) -> Result<GrowthFit> {
    let r = module.ring();
    if r.nvars() != 1 {
        return Err(Error::BadVariable("growth fits need exactly one variable".into()));
    }
    let module = module.prune();
    if !is_torsion(&module) {
        return Err(Error::NonTorsion);
    }
    if module.generators() == 0 {
        return Ok(GrowthFit {
            mu: 0,
            lambda: 0,
            constant: 0,
            points: Vec::new(),
            lambda_candidate: 0,
            m_shift: 0,
        });
    }
    // the oracle only reads the exact integer presentation, so the model
    // bounds are widened to cover the grid
    let e = |m: u32, n: u32| -> Result<u32> {
        let wide = r.with_precision(r.precision().max(m), r.degree_cap().max(n))?;
        finite_quotient_order(&module.with_ring(&wide)?, &FiniteQuotientSpec::new(m, vec![n]))
    };
    let (rank_p, lambda_c) = probe_mod_p(&e)?;
    let m_shift = if rank_p == 0 { 0 } else { probe_mu_saturation(&e, lambda_c)? };
    let mut lambda_c = lambda_c;
    for _ in 0..3 {
        match fit_on_grid(&e, grid, lambda_c, m_shift)? {
            Ok(fit) => return Ok(fit),
            Err(next) if next > lambda_c => lambda_c = next,
            Err(_) => break,
        }
    }
    Err(Error::Unstable(format!(
        "differences did not stabilize on the grid with lambda candidate {lambda_c}"
    )))
}

/// `(r, l)` with `e(1, n) = r*n + l` for large `n`.
fn probe_mod_p(e: &dyn Fn(u32, u32) -> Result<u32>) -> Result<(u32, u32)> {
    let mut n = 4;
    while n <= MAX_PROBE {
        let (a, b, c, d) = (e(1, n)?, e(1, n + 1)?, e(1, 2 * n)?, e(1, 2 * n + 1)?);
        if b - a == d - c && c - a == (b - a) * n {
            let r = b - a;
            return Ok((r, a - r * n));
        }
        n *= 2;
    }
    Err(Error::Unstable("mod p growth did not stabilize".into()))
}

/// Smallest shift making `e(m, n+1) - e(m, n)` independent of `m` on the grid.
fn probe_mu_saturation(e: &dyn Fn(u32, u32) -> Result<u32>, lambda_c: u32) -> Result<u32> {
    let slope = |m: u32| -> Result<u32> {
        let n = lambda_c * m + 4;
        Ok(e(m, n + 1)? - e(m, n)?)
    };
    let mut prev = slope(1)?;
    for m in 2..=12 {
        let cur = slope(m)?;
        if cur == prev {
            return Ok((m - 1).saturating_sub(2));
        }
        prev = cur;
    }
    Err(Error::Unstable("p-power part did not saturate".into()))
}

/// `Ok(fit)`, or `Err(lambda)` with the largest slope seen when unstable.
fn fit_on_grid(
    e: &(dyn Fn(u32, u32) -> Result<u32> + Sync),
    grid: &FitGrid,
    lambda_c: u32,
    m_shift: u32,
) -> Result<std::result::Result<GrowthFit, u32>> {
    if grid.ms.len() < 2 || grid.offsets.len() < 2 {
        return Err(Error::Invalid("grid needs two values of m and two offsets".into()));
    }
    let pts: Vec<(u32, u32)> = grid
        .ms
        .iter()
        .flat_map(|&m| {
            let m = m + m_shift;
            grid.offsets.iter().map(move |&o| (m, lambda_c * m + o))
        })
        .collect();
    let vals = pts
        .par_iter()
        .map(|&(m, n)| e(m, n))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let at = |i: usize, j: usize| vals[i * grid.offsets.len() + j] as i64;
    let (o0, o1) = (grid.offsets[0] as i64, grid.offsets[1] as i64);
    let num = at(0, 1) - at(0, 0);
    if num < 0 || num % (o1 - o0) != 0 {
        return Ok(Err(lambda_c));
    }
    let mu = num / (o1 - o0);
    let (m0, m1) = ((grid.ms[0] + m_shift) as i64, (grid.ms[1] + m_shift) as i64);
    let dm = at(1, 0) - at(0, 0) - mu * lambda_c as i64 * (m1 - m0);
    if dm < 0 || dm % (m1 - m0) != 0 {
        return Ok(Err(lambda_c));
    }
    let lambda = dm / (m1 - m0);
    let constant = at(0, 0) - lambda * m0 - mu * pts[0].1 as i64;
    let points: Vec<(u32, u32, u32, i64)> = pts
        .iter()
        .zip(&vals)
        .map(|(&(m, n), &v)| (m, n, v, v as i64 - lambda * m as i64 - mu * n as i64 - constant))
        .collect();
    if points.iter().any(|pt| pt.3 != 0) {
        return Ok(Err(lambda.max(0) as u32));
    }
    Ok(Ok(GrowthFit {
        mu: mu as u32,
        lambda: lambda as u32,
        constant,
        points,
        lambda_candidate: lambda_c,
        m_shift,
    }))
}
