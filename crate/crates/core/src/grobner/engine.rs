use std::cmp::Ordering;
use std::collections::BTreeSet;

use super::coeff::CoeffRing;
use crate::arith::monomial::Monomial;
use crate::error::{Error, Result};

/// Module monomial order: positions are grouped into blocks (a smaller block
/// number dominates); inside a block grevlex decides, then the position
/// (smaller index dominates).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleOrder {
    blocks: Vec<u32>,
}

impl ModuleOrder {
    /// Term-over-position.
    pub fn top(rank: usize) -> Self {
        ModuleOrder { blocks: vec![0; rank] }
    }

    /// Position-over-term.
    pub fn pot(rank: usize) -> Self {
        ModuleOrder {
            blocks: (0..rank as u32).collect(),
        }
    }

    pub fn blocks(blocks: Vec<u32>) -> Self {
        ModuleOrder { blocks }
    }

    pub fn rank(&self) -> usize {
        self.blocks.len()
    }

    /// This order on the first positions, with `extra` positions appended in
    /// a block below all existing ones.
    pub fn eliminating(&self, extra: usize) -> Self {
        let below = self.blocks.iter().max().map_or(0, |b| b + 1);
        let mut blocks = self.blocks.clone();
        blocks.extend(std::iter::repeat(below).take(extra));
        ModuleOrder { blocks }
    }

    pub fn cmp(&self, a: (usize, &Monomial), b: (usize, &Monomial)) -> Ordering {
        self.blocks[b.0]
            .cmp(&self.blocks[a.0])
            .then_with(|| a.1.cmp(b.1))
            .then_with(|| b.0.cmp(&a.0))
    }
}

/// A sparse vector of a free module, terms sorted in decreasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModVec<E> {
    pub terms: Vec<(usize, Monomial, E)>,
}

impl<E: Clone> ModVec<E> {
    pub fn zero() -> Self {
        ModVec { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&(usize, Monomial, E)> {
        self.terms.first()
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.1.degree()).max().unwrap_or(0)
    }

    /// Builds a vector from unsorted terms, combining duplicates.
    pub fn from_terms<R: CoeffRing<Elem = E>>(
        ring: &R,
        order: &ModuleOrder,
        mut terms: Vec<(usize, Monomial, E)>,
    ) -> Self {
        terms.sort_by(|a, b| order.cmp((b.0, &b.1), (a.0, &a.1)));
        let mut out: Vec<(usize, Monomial, E)> = Vec::with_capacity(terms.len());
        for (pos, m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == pos && last.1 == m => last.2 = ring.add(&last.2, &c),
                _ => out.push((pos, m, c)),
            }
        }
        out.retain(|t| !ring.is_zero(&t.2));
        ModVec { terms: out }
    }
}

/// Strong Gröbner basis computations over `R[t1..tn]^rank`.
#[derive(Clone, Debug)]
pub struct Engine<R: CoeffRing> {
    pub ring: R,
    pub nvars: usize,
    pub order: ModuleOrder,
    /// Monomials of degree `>= cap` are rejected with `DegreeCapExceeded`.
    pub degree_cap: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Pair {
    degree: u32,
    seq: u64,
    i: usize,
    j: Option<usize>,
}

impl<R: CoeffRing> Engine<R> {
    pub fn new(ring: R, nvars: usize, order: ModuleOrder, degree_cap: Option<u32>) -> Self {
        Engine {
            ring,
            nvars,
            order,
            degree_cap,
        }
    }

    pub fn rank(&self) -> usize {
        self.order.rank()
    }

    fn check_degree(&self, m: &Monomial) -> Result<()> {
        match self.degree_cap {
            Some(cap) if m.degree() >= cap => Err(Error::DegreeCapExceeded(cap)),
            _ => Ok(()),
        }
    }

    /// `a * f - b * m * g`.
    fn combine(
        &self,
        f: &ModVec<R::Elem>,
        a: &R::Elem,
        g: &ModVec<R::Elem>,
        b: &R::Elem,
        m: &Monomial,
    ) -> Result<ModVec<R::Elem>> {
        let r = &self.ring;
        let mut out = Vec::with_capacity(f.terms.len() + g.terms.len());
        let mut fi = f.terms.iter().peekable();
        let mut shifted = Vec::with_capacity(g.terms.len());
        for (pos, gm, gc) in &g.terms {
            let mm = gm.mul(m);
            self.check_degree(&mm)?;
            shifted.push((*pos, mm, r.neg(&r.mul(b, gc))));
        }
        let mut gi = shifted.into_iter().peekable();
        loop {
            let ord = match (fi.peek(), gi.peek()) {
                (None, None) => break,
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (Some(x), Some(y)) => self.order.cmp((x.0, &x.1), (y.0, &y.1)),
            };
            match ord {
                Ordering::Greater => {
                    let (pos, m, c) = fi.next().unwrap();
                    let c = r.mul(a, c);
                    if !r.is_zero(&c) {
                        out.push((*pos, m.clone(), c));
                    }
                }
                Ordering::Less => {
                    let t = gi.next().unwrap();
                    if !r.is_zero(&t.2) {
                        out.push(t);
                    }
                }
                Ordering::Equal => {
                    let (pos, m, c) = fi.next().unwrap();
                    let (_, _, d) = gi.next().unwrap();
                    let c = r.add(&r.mul(a, c), &d);
                    if !r.is_zero(&c) {
                        out.push((*pos, m.clone(), c));
                    }
                }
            }
        }
        Ok(ModVec { terms: out })
    }

    fn scale(&self, f: &ModVec<R::Elem>, c: &R::Elem) -> ModVec<R::Elem> {
        let r = &self.ring;
        ModVec {
            terms: f
                .terms
                .iter()
                .filter_map(|(pos, m, a)| {
                    let x = r.mul(a, c);
                    (!r.is_zero(&x)).then(|| (*pos, m.clone(), x))
                })
                .collect(),
        }
    }

    pub fn normalize(&self, mut f: ModVec<R::Elem>) -> ModVec<R::Elem> {
        if f.is_zero() {
            return f;
        }
        let coeffs: Vec<&R::Elem> = f.terms.iter().map(|t| &t.2).collect();
        if let Some(u) = self.ring.normalizer(&coeffs) {
            for t in &mut f.terms {
                t.2 = self.ring.div_unit(&t.2, &u);
            }
        }
        f
    }

    fn reducer<'a>(
        &self,
        pos: usize,
        m: &Monomial,
        c: &R::Elem,
        basis: &'a [ModVec<R::Elem>],
        skip: Option<usize>,
    ) -> Option<&'a ModVec<R::Elem>> {
        let v = self.ring.valuation(c);
        basis.iter().enumerate().find_map(|(k, g)| {
            if Some(k) == skip {
                return None;
            }
            let (gp, gm, gc) = g.lead()?;
            (*gp == pos && gm.divides(m) && self.ring.valuation(gc) <= v).then_some(g)
        })
    }

    /// Strong reduction; with `full` every term is reduced, otherwise only the
    /// leading one.
    fn reduce_with(
        &self,
        mut f: ModVec<R::Elem>,
        basis: &[ModVec<R::Elem>],
        full: bool,
        skip: Option<usize>,
    ) -> Result<ModVec<R::Elem>> {
        let mut idx = 0;
        while idx < f.terms.len() {
            let (pos, m, c) = &f.terms[idx];
            match self.reducer(*pos, m, c, basis, skip) {
                Some(g) => {
                    let (_, gm, gc) = g.lead().unwrap();
                    let (u, q) = self.ring.divide_lead(gc, c);
                    let shift = gm.quotient_of(m);
                    f = self.normalize(self.combine(&f, &u, g, &q, &shift)?);
                }
                None if full => idx += 1,
                None => break,
            }
        }
        Ok(f)
    }

    /// Fully reduced remainder of `f`; zero iff `f` lies in the span of the
    /// Gröbner basis `basis`. Over `Z_(p)` the remainder is defined up to a
    /// unit.
    pub fn normal_form(&self, f: &ModVec<R::Elem>, basis: &[ModVec<R::Elem>]) -> Result<ModVec<R::Elem>> {
        self.reduce_with(self.normalize(f.clone()), basis, true, None)
    }

    fn pair_degree(&self, a: &ModVec<R::Elem>, b: &ModVec<R::Elem>) -> u32 {
        a.lead().unwrap().1.lcm(&b.lead().unwrap().1).degree()
    }

    fn s_poly(&self, a: &ModVec<R::Elem>, b: &ModVec<R::Elem>) -> Result<ModVec<R::Elem>> {
        let (_, ma, ca) = a.lead().unwrap();
        let (_, mb, cb) = b.lead().unwrap();
        let l = ma.lcm(mb);
        let (hi, lo, mhi, mlo, chi, clo) = if self.ring.valuation(ca) <= self.ring.valuation(cb) {
            (b, a, mb, ma, cb, ca)
        } else {
            (a, b, ma, mb, ca, cb)
        };
        // u * chi = q * clo; the result is u * (l/mhi) * hi - q * (l/mlo) * lo
        let (u, q) = self.ring.divide_lead(clo, chi);
        let shifted = self.combine(&ModVec::zero(), &self.ring.zero(), hi, &self.ring.neg(&u), &mhi.quotient_of(&l))?;
        self.combine(&shifted, &self.ring.one(), lo, &q, &mlo.quotient_of(&l))
    }

    fn skip_by_product(&self, a: &ModVec<R::Elem>, b: &ModVec<R::Elem>) -> bool {
        if !self.ring.product_criterion() || self.rank() != 1 {
            return false;
        }
        let (_, ma, ca) = a.lead().unwrap();
        let (_, mb, cb) = b.lead().unwrap();
        self.ring.valuation(ca) == 0 && self.ring.valuation(cb) == 0 && ma.lcm(mb).degree() == ma.degree() + mb.degree()
    }

    /// A minimal, interreduced strong Gröbner basis of the span of `gens`.
    pub fn gbasis(&self, gens: &[ModVec<R::Elem>]) -> Result<Vec<ModVec<R::Elem>>> {
        let mut basis: Vec<ModVec<R::Elem>> = Vec::new();
        let mut pairs: BTreeSet<Pair> = BTreeSet::new();
        let mut seq = 0u64;
        for f in gens {
            match self.degree_cap {
                Some(cap) if f.max_degree() >= cap => return Err(Error::DegreeCapExceeded(cap)),
                _ => {}
            }
            let h = self.reduce_with(self.normalize(f.clone()), &basis, false, None)?;
            if !h.is_zero() {
                self.insert(&mut basis, &mut pairs, &mut seq, h);
            }
        }
        while let Some(pair) = pairs.pop_first() {
            let s = match pair.j {
                Some(j) => self.s_poly(&basis[pair.i], &basis[j])?,
                None => {
                    let ann = self.ring.annihilator(&basis[pair.i].lead().unwrap().2).unwrap();
                    self.scale(&basis[pair.i], &ann)
                }
            };
            let h = self.reduce_with(self.normalize(s), &basis, false, None)?;
            if !h.is_zero() {
                self.insert(&mut basis, &mut pairs, &mut seq, h);
            }
        }
        let minimal = self.minimize(basis);
        let mut out = Vec::with_capacity(minimal.len());
        for k in 0..minimal.len() {
            out.push(self.reduce_with(minimal[k].clone(), &minimal, true, Some(k))?);
        }
        for f in gens {
            if !self.normal_form(f, &out)?.is_zero() {
                return Err(Error::Invalid("Gröbner basis membership certificate failed".into()));
            }
        }
        Ok(out)
    }

    fn insert(&self, basis: &mut Vec<ModVec<R::Elem>>, pairs: &mut BTreeSet<Pair>, seq: &mut u64, h: ModVec<R::Elem>) {
        let k = basis.len();
        let (hp, hm, hc) = h.lead().unwrap().clone();
        for (i, g) in basis.iter().enumerate() {
            if g.lead().unwrap().0 == hp && !self.skip_by_product(g, &h) {
                pairs.insert(Pair {
                    degree: self.pair_degree(g, &h),
                    seq: *seq,
                    i,
                    j: Some(k),
                });
                *seq += 1;
            }
        }
        if self.ring.annihilator(&hc).is_some() {
            pairs.insert(Pair {
                degree: hm.degree(),
                seq: *seq,
                i: k,
                j: None,
            });
            *seq += 1;
        }
        basis.push(h);
    }

    /// Drops elements whose leading term is strongly divisible by another.
    fn minimize(&self, basis: Vec<ModVec<R::Elem>>) -> Vec<ModVec<R::Elem>> {
        let key = |g: &ModVec<R::Elem>| {
            let (p, m, c) = g.lead().unwrap();
            (*p, m.clone(), self.ring.valuation(c))
        };
        let keys: Vec<_> = basis.iter().map(key).collect();
        let mut keep = vec![true; basis.len()];
        for i in 0..basis.len() {
            let (pi, mi, vi) = &keys[i];
            for j in 0..basis.len() {
                if i == j || !keep[j] {
                    continue;
                }
                let (pj, mj, vj) = &keys[j];
                let divides = pj == pi && mj.divides(mi) && vj <= vi;
                if divides && (keys[i] != keys[j] || j < i) {
                    keep[i] = false;
                    break;
                }
            }
        }
        basis.into_iter().zip(keep).filter_map(|(g, k)| k.then_some(g)).collect()
    }

    /// Generators of the relations among `gens`, as vectors of rank
    /// `gens.len()` sorted in the term-over-position order.
    pub fn syzygies(&self, gens: &[ModVec<R::Elem>]) -> Result<Vec<ModVec<R::Elem>>> {
        let rank = self.rank();
        let n = gens.len();
        let ext = Engine::new(self.ring.clone(), self.nvars, self.order.eliminating(n), self.degree_cap);
        let lifted: Vec<ModVec<R::Elem>> = gens
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let mut terms = g.terms.clone();
                terms.push((rank + i, Monomial::one(self.nvars), self.ring.one()));
                ModVec::from_terms(&self.ring, &ext.order, terms)
            })
            .collect();
        let gb = ext.gbasis(&lifted)?;
        let top = ModuleOrder::top(n);
        Ok(gb
            .into_iter()
            .filter(|g| g.lead().unwrap().0 >= rank)
            .map(|g| {
                let terms = g.terms.into_iter().map(|(p, m, c)| (p - rank, m, c)).collect();
                ModVec::from_terms(&self.ring, &top, terms)
            })
            .collect())
    }
}
