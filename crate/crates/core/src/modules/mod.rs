//! Finitely presented modules over `Z_p[[t1..td]]`, given by relation
//! matrices with integer polynomial entries.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::intpoly::{valuation_big, IntPoly};
use crate::arith::parse::parse_poly;
use crate::arith::ring::{RingDescriptor, RingJson};
use crate::arith::series::PolySeries;
use crate::error::{Error, Result};
use crate::grobner::LocalEngine;

/// `coker(relations)`, the relation matrix stored column by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedModule {
    ring: RingDescriptor,
    generators: usize,
    relations: Vec<Vec<IntPoly>>,
}

/// Wire form: `{"ring": {...}, "generators": k, "relations": [[poly; k]; m]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleJson {
    pub ring: RingJson,
    pub generators: usize,
    pub relations: Vec<Vec<String>>,
}

impl PresentedModule {
    pub fn new(ring: &RingDescriptor, generators: usize, relations: Vec<Vec<IntPoly>>) -> Result<Self> {
        for col in &relations {
            if col.len() != generators {
                return Err(Error::Invalid(format!(
                    "relation of length {} for {} generators",
                    col.len(),
                    generators
                )));
            }
            if col.iter().any(|f| f.nvars() != ring.nvars()) {
                return Err(Error::RingMismatch);
            }
        }
        Ok(PresentedModule {
            ring: ring.clone(),
            generators,
            relations,
        })
    }

    pub fn from_series(ring: &RingDescriptor, generators: usize, relations: &[Vec<PolySeries>]) -> Result<Self> {
        if relations.iter().flatten().any(|f| f.ring() != ring) {
            return Err(Error::RingMismatch);
        }
        Self::new(
            ring,
            generators,
            relations.iter().map(|c| c.iter().map(PolySeries::lift).collect()).collect(),
        )
    }

    /// `B/(f1, ..., fm)`.
    pub fn cyclic(ring: &RingDescriptor, relations: Vec<IntPoly>) -> Result<Self> {
        Self::new(ring, 1, relations.into_iter().map(|f| vec![f]).collect())
    }

    pub fn zero(ring: &RingDescriptor) -> Self {
        PresentedModule {
            ring: ring.clone(),
            generators: 0,
            relations: Vec::new(),
        }
    }

    pub fn free(ring: &RingDescriptor, rank: usize) -> Self {
        PresentedModule {
            ring: ring.clone(),
            generators: rank,
            relations: Vec::new(),
        }
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &[Vec<IntPoly>] {
        &self.relations
    }

    pub fn relation_count(&self) -> usize {
        self.relations.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> &IntPoly {
        &self.relations[col][row]
    }

    /// The relation matrix in the truncated model.
    pub fn relations_series(&self) -> Vec<Vec<PolySeries>> {
        self.relations
            .iter()
            .map(|c| c.iter().map(|f| PolySeries::from_intpoly(&self.ring, f)).collect())
            .collect()
    }

    /// Rows of the relation matrix.
    pub fn rows(&self) -> Vec<Vec<IntPoly>> {
        (0..self.generators)
            .map(|i| self.relations.iter().map(|c| c[i].clone()).collect())
            .collect()
    }

    /// Same presentation over another ring with the same variables count.
    pub fn with_ring(&self, ring: &RingDescriptor) -> Result<Self> {
        if ring.nvars() != self.ring.nvars() {
            return Err(Error::RingMismatch);
        }
        Ok(PresentedModule {
            ring: ring.clone(),
            ..self.clone()
        })
    }

    /// Zero test by Nakayama: the module vanishes iff its relation matrix
    /// has full row rank modulo the maximal ideal `(p, t1..td)`.
    pub fn is_zero(&self) -> bool {
        let p = self.ring.p();
        let mut rows: Vec<Vec<u64>> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(|f| residue(&f.constant_term(), p)).collect())
            .collect();
        rank_mod_p(&mut rows, p) == self.generators
    }

    /// Removes generators killed by relations with a unit entry, using
    /// row and column operations that are invertible over the local ring.
    pub fn prune(&self) -> PresentedModule {
        let p = BigInt::from(self.ring.p());
        let mut k = self.generators;
        let mut cols: Vec<Vec<IntPoly>> = self.relations.iter().filter(|c| c.iter().any(|f| !f.is_zero())).cloned().collect();
        loop {
            let pivot = (0..cols.len())
                .flat_map(|j| (0..k).map(move |i| (i, j)))
                .filter(|&(i, j)| !(cols[j][i].constant_term() % &p).is_zero())
                .min_by_key(|&(i, j)| (cols[j][i].len(), cols[j][i].total_degree(), j, i));
            let Some((i, j)) = pivot else { break };
            let pcol = cols.remove(j);
            let u = pcol[i].clone();
            let unit_const = u.is_constant().then(|| u.constant_term());
            let mut next = Vec::with_capacity(cols.len());
            for col in cols {
                let a = &col[i];
                let mut new: Vec<IntPoly> = if a.is_zero() {
                    col.clone()
                } else {
                    match &unit_const {
                        Some(c) if c.abs().is_one() => {
                            let s = IntPoly::constant(self.ring.nvars(), c.clone());
                            (0..k).map(|r| &col[r] - &(&(&s * a) * &pcol[r])).collect()
                        }
                        _ => (0..k).map(|r| &(&u * &col[r]) - &(a * &pcol[r])).collect(),
                    }
                };
                new.remove(i);
                if new.iter().any(|f| !f.is_zero()) {
                    next.push(strip_unit_content(new, self.ring.p()));
                }
            }
            cols = next;
            k -= 1;
        }
        PresentedModule {
            ring: self.ring.clone(),
            generators: k,
            relations: cols,
        }
    }

    pub fn from_json(json: &ModuleJson) -> Result<Self> {
        let ring = json.ring.build()?;
        let mut relations = Vec::with_capacity(json.relations.len());
        for col in &json.relations {
            relations.push(col.iter().map(|s| parse_poly(&ring, s)).collect::<Result<Vec<_>>>()?);
        }
        Self::new(&ring, json.generators, relations)
    }

    pub fn to_json(&self) -> ModuleJson {
        ModuleJson {
            ring: self.ring.to_json(),
            generators: self.generators,
            relations: self
                .relations
                .iter()
                .map(|c| c.iter().map(|f| f.render(self.ring.vars())).collect())
                .collect(),
        }
    }
}

fn residue(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.try_into().expect("residue below p")
}

fn rank_mod_p(rows: &mut [Vec<u64>], p: u64) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(r) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, r);
        let inv = mod_inv(rows[rank][c], p);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let f = rows[r][c] * inv % p;
                for cc in 0..ncols {
                    rows[r][cc] = (rows[r][cc] + p * p - f * rows[rank][cc] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mod_inv(a: u64, p: u64) -> u64 {
    let e = BigInt::from(a).extended_gcd(&BigInt::from(p));
    residue(&e.x, p)
}

/// Divides a column by the part of its integer content prime to `p`.
fn strip_unit_content(col: Vec<IntPoly>, p: u64) -> Vec<IntPoly> {
    let mut g = BigInt::zero();
    for f in &col {
        g = g.gcd(&f.content());
    }
    if g.is_zero() {
        return col;
    }
    let v = valuation_big(&g, p);
    let w = g / BigInt::from(p).pow(v);
    if w.is_one() {
        col
    } else {
        col.iter().map(|f| f.div_scalar(&w)).collect()
    }
}

fn last_variable(m: &PresentedModule, k: usize) -> Result<()> {
    let d = m.ring.nvars();
    if d == 0 || k != d - 1 {
        return Err(Error::BadVariable(format!(
            "descent is along the last variable (index {}), got index {k}",
            d.saturating_sub(1)
        )));
    }
    Ok(())
}

/// `⊕ B/(f_i^{e_i})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryModule {
    pub ring: RingDescriptor,
    pub parts: Vec<(IntPoly, u32)>,
}

pub fn elementary_to_presentation(e: &ElementaryModule) -> Result<PresentedModule> {
    let n = e.parts.len();
    let mut relations = vec![vec![IntPoly::zero(e.ring.nvars()); n]; n];
    for (i, (f, k)) in e.parts.iter().enumerate() {
        if f.is_zero() {
            return Err(Error::Invalid("elementary generator is zero".into()));
        }
        if valuation_big(&f.constant_term(), e.ring.p()) == 0 || *k == 0 {
            return Err(Error::UnitGenerator(f.render(e.ring.vars())));
        }
        relations[i][i] = f.pow(*k);
    }
    PresentedModule::new(&e.ring, n, relations)
}

/// `M / t_k M` over the ring without `t_k`.
pub fn quotient_by_t(m: &PresentedModule, k: usize) -> Result<PresentedModule> {
    last_variable(m, k)?;
    let sub = m.ring.without_var(k)?;
    let relations = m
        .relations
        .iter()
        .map(|c| c.iter().map(|f| f.project(k)).collect::<Vec<_>>())
        .filter(|c: &Vec<IntPoly>| c.iter().any(|f| !f.is_zero()))
        .collect();
    PresentedModule::new(&sub, m.generators, relations)
}

/// The kernel of multiplication by `t_k`, together with its generators as
/// vectors of `B^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionPart {
    pub module: PresentedModule,
    pub generators: Vec<Vec<IntPoly>>,
}

fn engine_for(m: &PresentedModule, rank: usize) -> LocalEngine {
    LocalEngine::new(m.ring.p(), m.ring.nvars(), rank, Some(m.ring.degree_cap()))
}

/// `M_{t_k} = { x in M : t_k x = 0 }` as a module over the ring without `t_k`.
pub fn t_torsion(m: &PresentedModule, k: usize) -> Result<PresentedModule> {
    Ok(t_torsion_part(m, k)?.module)
}

pub fn t_torsion_part(m: &PresentedModule, k: usize) -> Result<TorsionPart> {
    last_variable(m, k)?;
    let sub = m.ring.without_var(k)?;
    let n = m.ring.nvars();
    let rank = m.generators;
    if rank == 0 {
        return Ok(TorsionPart {
            module: PresentedModule::zero(&sub),
            generators: Vec::new(),
        });
    }
    let engine = engine_for(m, rank);
    let phi: Vec<Vec<IntPoly>> = m.relations.iter().filter(|c| c.iter().any(|f| !f.is_zero())).cloned().collect();
    let mut block = phi.clone();
    let minus_t = -&IntPoly::var(n, k);
    for i in 0..rank {
        let mut col = vec![IntPoly::zero(n); rank];
        col[i] = minus_t.clone();
        block.push(col);
    }
    let syz = engine.syzygies(&block)?;
    let mut kept: Vec<Vec<IntPoly>> = Vec::new();
    let mut span = engine.gbasis(&phi)?;
    for s in syz {
        let x: Vec<IntPoly> = s[phi.len()..].to_vec();
        if x.iter().all(IntPoly::is_zero) || engine.contains(&span, &x)? {
            continue;
        }
        kept.push(x);
        let mut gens = phi.clone();
        gens.extend(kept.iter().cloned());
        span = engine.gbasis(&gens)?;
    }
    if kept.is_empty() {
        return Ok(TorsionPart {
            module: PresentedModule::zero(&sub),
            generators: Vec::new(),
        });
    }
    let mut xphi = kept.clone();
    xphi.extend(phi.iter().cloned());
    let rels = engine.syzygies(&xphi)?;
    let r = kept.len();
    let relations: Vec<Vec<IntPoly>> = rels
        .iter()
        .map(|s| s[..r].iter().map(|f| f.project(k)).collect::<Vec<_>>())
        .filter(|c: &Vec<IntPoly>| c.iter().any(|f| !f.is_zero()))
        .collect();
    let module = PresentedModule::new(&sub, r, relations)?;
    Ok(TorsionPart {
        module: module.prune(),
        generators: kept,
    })
}

pub fn direct_sum(a: &PresentedModule, b: &PresentedModule) -> Result<PresentedModule> {
    if a.ring != b.ring {
        return Err(Error::RingMismatch);
    }
    let n = a.ring.nvars();
    let k = a.generators + b.generators;
    let mut relations = Vec::with_capacity(a.relations.len() + b.relations.len());
    for c in &a.relations {
        let mut col = c.clone();
        col.resize(k, IntPoly::zero(n));
        relations.push(col);
    }
    for c in &b.relations {
        let mut col = vec![IntPoly::zero(n); a.generators];
        col.extend(c.iter().cloned());
        relations.push(col);
    }
    PresentedModule::new(&a.ring, k, relations)
}

/// Whether `t_k` times each lifted torsion generator lies in the image of
/// the relations.
pub fn torsion_is_consistent(m: &PresentedModule, part: &TorsionPart, k: usize) -> Result<bool> {
    if part.generators.is_empty() {
        return Ok(true);
    }
    let engine = engine_for(m, m.generators);
    let basis = engine.gbasis(&m.relations)?;
    let t = IntPoly::var(m.ring.nvars(), k);
    for x in &part.generators {
        let tx: Vec<IntPoly> = x.iter().map(|f| &t * f).collect();
        if !engine.contains(&basis, &tx)? {
            return Ok(false);
        }
    }
    Ok(true)
}
