//! Strong Gröbner bases and syzygies for submodules of free modules over
//! `R[t1..td]`, where `R` is `Z/p^N` or `Z_(p)`.

mod coeff;
mod engine;

pub use coeff::{CoeffRing, LocalInt};
pub use engine::{Engine, ModVec, ModuleOrder};

use num_bigint::BigInt;

use crate::arith::intpoly::IntPoly;
use crate::arith::ring::RingDescriptor;
use crate::arith::series::PolySeries;
use crate::error::{Error, Result};

/// A vector of the free module `B^rank`.
pub type ModuleVector = Vec<PolySeries>;

/// A strong Gröbner basis over `(Z/p^N)[t1..td]` in the term-over-position
/// grevlex order, with `t1 > t2 > ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GBasis {
    ring: RingDescriptor,
    rank: usize,
    elements: Vec<ModVec<u64>>,
}

fn chain_engine(ring: &RingDescriptor, rank: usize) -> Engine<crate::arith::padic::Zpn> {
    Engine::new(ring.coeffs(), ring.nvars(), ModuleOrder::top(rank), Some(ring.degree_cap()))
}

fn to_modvec(engine: &Engine<crate::arith::padic::Zpn>, v: &[PolySeries]) -> ModVec<u64> {
    let terms = v
        .iter()
        .enumerate()
        .flat_map(|(pos, f)| f.raw_terms().iter().map(move |(m, &c)| (pos, m.clone(), c)))
        .collect();
    ModVec::from_terms(&engine.ring, &engine.order, terms)
}

fn from_modvec(ring: &RingDescriptor, rank: usize, v: &ModVec<u64>) -> ModuleVector {
    let mut out = vec![PolySeries::zero(ring); rank];
    for (pos, m, c) in &v.terms {
        out[*pos].add_term(m.clone(), *c);
    }
    out
}

fn shape(gens: &[ModuleVector]) -> Result<(RingDescriptor, usize)> {
    let first = gens
        .first()
        .ok_or_else(|| Error::Invalid("no generators given".into()))?;
    let ring = first
        .first()
        .ok_or_else(|| Error::Invalid("vectors of rank 0".into()))?
        .ring()
        .clone();
    let rank = first.len();
    for g in gens {
        if g.len() != rank {
            return Err(Error::Invalid("vectors of different ranks".into()));
        }
        if g.iter().any(|f| f.ring() != &ring) {
            return Err(Error::RingMismatch);
        }
    }
    Ok((ring, rank))
}

impl GBasis {
    pub fn new(ring: &RingDescriptor, rank: usize, gens: &[ModuleVector]) -> Result<GBasis> {
        if gens.iter().any(|g| g.len() != rank) {
            return Err(Error::Invalid("vectors of different ranks".into()));
        }
        if gens.iter().flatten().any(|f| f.ring() != ring) {
            return Err(Error::RingMismatch);
        }
        let engine = chain_engine(ring, rank);
        let vecs: Vec<_> = gens.iter().map(|g| to_modvec(&engine, g)).collect();
        Ok(GBasis {
            ring: ring.clone(),
            rank,
            elements: engine.gbasis(&vecs)?,
        })
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn generators(&self) -> Vec<ModuleVector> {
        self.elements
            .iter()
            .map(|v| from_modvec(&self.ring, self.rank, v))
            .collect()
    }

    pub fn contains(&self, v: &[PolySeries]) -> Result<bool> {
        Ok(normal_form(v, self)?.iter().all(PolySeries::is_zero))
    }

    /// Every S-polynomial and annihilator product reduces to zero.
    pub fn satisfies_buchberger(&self) -> Result<bool> {
        let engine = chain_engine(&self.ring, self.rank);
        let zn = self.ring.coeffs();
        let mut checks = Vec::new();
        for (i, a) in self.elements.iter().enumerate() {
            let (pa, ma, ca) = a.lead().unwrap();
            if let Some(ann) = CoeffRing::annihilator(&zn, ca) {
                checks.push(ModVec {
                    terms: a
                        .terms
                        .iter()
                        .filter_map(|(p, m, c)| {
                            let x = zn.mul(*c, ann);
                            (x != 0).then(|| (*p, m.clone(), x))
                        })
                        .collect(),
                });
            }
            for b in &self.elements[i + 1..] {
                let (pb, mb, cb) = b.lead().unwrap();
                if pa != pb {
                    continue;
                }
                let l = ma.lcm(mb);
                let (lo, hi, clo, chi, mlo, mhi) = if zn.valuation(*ca) <= zn.valuation(*cb) {
                    (a, b, ca, cb, ma, mb)
                } else {
                    (b, a, cb, ca, mb, ma)
                };
                let (_, q) = CoeffRing::divide_lead(&zn, clo, chi);
                let mut terms = Vec::new();
                let sh = mhi.quotient_of(&l);
                let sl = mlo.quotient_of(&l);
                for (p, m, c) in &hi.terms {
                    terms.push((*p, m.mul(&sh), *c));
                }
                for (p, m, c) in &lo.terms {
                    terms.push((*p, m.mul(&sl), zn.neg(zn.mul(q, *c))));
                }
                if terms.iter().any(|t| t.1.degree() >= self.ring.degree_cap()) {
                    return Err(Error::DegreeCapExceeded(self.ring.degree_cap()));
                }
                checks.push(ModVec::from_terms(&zn, &engine.order, terms));
            }
        }
        for s in checks {
            if !engine.normal_form(&s, &self.elements)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Strong Gröbner basis of the submodule spanned by `gens`.
pub fn gbasis(gens: &[ModuleVector]) -> Result<GBasis> {
    let (ring, rank) = shape(gens)?;
    GBasis::new(&ring, rank, gens)
}

/// Fully reduced remainder of `v` against `g`.
pub fn normal_form(v: &[PolySeries], g: &GBasis) -> Result<ModuleVector> {
    if v.len() != g.rank {
        return Err(Error::Invalid("vector rank differs from the basis rank".into()));
    }
    if v.iter().any(|f| f.ring() != &g.ring) {
        return Err(Error::RingMismatch);
    }
    let engine = chain_engine(&g.ring, g.rank);
    let r = engine.normal_form(&to_modvec(&engine, v), &g.elements)?;
    Ok(from_modvec(&g.ring, g.rank, &r))
}

/// Generators of `{ c : sum c_i gens_i = 0 }`.
pub fn syzygies(gens: &[ModuleVector]) -> Result<Vec<ModuleVector>> {
    let (ring, rank) = shape(gens)?;
    let engine = chain_engine(&ring, rank);
    let vecs: Vec<_> = gens.iter().map(|g| to_modvec(&engine, g)).collect();
    Ok(engine
        .syzygies(&vecs)?
        .iter()
        .map(|s| from_modvec(&ring, gens.len(), s))
        .collect())
}

/// Exact computations over `Z_(p)[t1..tn]` on integer polynomial matrices
/// given column-wise.
#[derive(Clone, Debug)]
pub struct LocalEngine {
    engine: Engine<LocalInt>,
}

impl LocalEngine {
    pub fn new(p: u64, nvars: usize, rank: usize, degree_cap: Option<u32>) -> Self {
        LocalEngine {
            engine: Engine::new(LocalInt::new(p), nvars, ModuleOrder::top(rank), degree_cap),
        }
    }

    pub fn engine(&self) -> &Engine<LocalInt> {
        &self.engine
    }

    pub fn vector(&self, column: &[IntPoly]) -> ModVec<BigInt> {
        let terms = column
            .iter()
            .enumerate()
            .flat_map(|(pos, f)| f.terms().map(move |(m, c)| (pos, m.clone(), c.clone())))
            .collect();
        ModVec::from_terms(&self.engine.ring, &self.engine.order, terms)
    }

    pub fn column(&self, v: &ModVec<BigInt>, rank: usize) -> Vec<IntPoly> {
        let mut out = vec![IntPoly::zero(self.engine.nvars); rank];
        for (pos, m, c) in &v.terms {
            out[*pos].add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn gbasis(&self, columns: &[Vec<IntPoly>]) -> Result<Vec<ModVec<BigInt>>> {
        let vecs: Vec<_> = columns.iter().map(|c| self.vector(c)).collect();
        self.engine.gbasis(&vecs)
    }

    pub fn contains(&self, basis: &[ModVec<BigInt>], column: &[IntPoly]) -> Result<bool> {
        Ok(self.engine.normal_form(&self.vector(column), basis)?.is_zero())
    }

    /// Relations among the columns, each returned as a coefficient column of
    /// length `columns.len()`.
    pub fn syzygies(&self, columns: &[Vec<IntPoly>]) -> Result<Vec<Vec<IntPoly>>> {
        let vecs: Vec<_> = columns.iter().map(|c| self.vector(c)).collect();
        let syz = self.engine.syzygies(&vecs)?;
        Ok(syz.iter().map(|s| self.column(s, columns.len())).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse::parse_series;

    fn ring(p: u64, n: u32) -> RingDescriptor {
        RingDescriptor::new(p, n, vec!["t".into()], 12).unwrap()
    }

    fn col(r: &RingDescriptor, srcs: &[&str]) -> ModuleVector {
        srcs.iter().map(|s| parse_series(r, s).unwrap()).collect()
    }

    #[test]
    fn single_generator() {
        let r = ring(3, 2);
        let g = gbasis(&[col(&r, &["t"])]).unwrap();
        assert_eq!(g.generators(), vec![col(&r, &["t"])]);
    }

    #[test]
    fn interreduced_pair() {
        let r = ring(5, 3);
        let g = gbasis(&[col(&r, &["5"]), col(&r, &["t"])]).unwrap();
        let mut gens = g.generators();
        gens.sort_by_key(|v| v[0].render());
        assert_eq!(gens, vec![col(&r, &["5"]), col(&r, &["t"])]);
        assert_eq!(normal_form(&col(&r, &["1"]), &g).unwrap(), col(&r, &["1"]));
    }

    #[test]
    fn chain_ring_closure() {
        // S(t^2 + pt, pt) = t*(pt) - p*(t^2 + pt) = -p^2 t, which pt reduces away;
        // the tail pt of the first generator is reduced as well
        let r = ring(5, 4);
        let gens = [col(&r, &["t^2 + 5*t"]), col(&r, &["5*t"])];
        let g = gbasis(&gens).unwrap();
        assert_eq!(g.generators(), vec![col(&r, &["t^2"]), col(&r, &["5*t"])]);
        for v in &gens {
            assert!(g.contains(v).unwrap());
        }
        assert!(g.satisfies_buchberger().unwrap());
    }

    #[test]
    fn membership_certificate() {
        let r = ring(5, 4);
        let g = gbasis(&[col(&r, &["5*t"]), col(&r, &["25"])]).unwrap();
        assert!(normal_form(&col(&r, &["25 + 5*t"]), &g).unwrap().iter().all(PolySeries::is_zero));
        assert!(!g.contains(&col(&r, &["5"])).unwrap());
    }

    #[test]
    fn syzygy_examples() {
        let r = ring(3, 3);
        let s = syzygies(&[col(&r, &["t"]), col(&r, &["t"])]).unwrap();
        assert_eq!(s, vec![col(&r, &["1", "-1"])]);

        let s = syzygies(&[col(&r, &["9"])]).unwrap();
        assert_eq!(s, vec![col(&r, &["3"])]);

        // columns of diag(p, t): only the annihilator p^(N-1) of p
        let s = syzygies(&[col(&r, &["3", "0"]), col(&r, &["0", "t"])]).unwrap();
        assert_eq!(s, vec![col(&r, &["9", "0"])]);
    }

    #[test]
    fn local_ring_has_no_annihilators() {
        let e = LocalEngine::new(3, 2, 1, None);
        let c = |f: IntPoly| vec![f];
        let s = IntPoly::var(2, 0);
        let t = IntPoly::var(2, 1);
        let p = IntPoly::constant(2, 3);
        let syz = e.syzygies(&[c(s.clone()), c(&p * &t)]).unwrap();
        // the only relation is the Koszul one (pt, -s)
        assert_eq!(syz.len(), 1);
        let combo = &(&syz[0][0] * &s) + &(&syz[0][1] * &(&p * &t));
        assert!(combo.is_zero());
        let basis = e.gbasis(&[c(s.clone()), c(&p * &t)]).unwrap();
        assert!(!e.contains(&basis, &[t.clone()]).unwrap());
        assert!(e.contains(&basis, &[&(&p * &t) + &(&s * &t)]).unwrap());
    }
}
