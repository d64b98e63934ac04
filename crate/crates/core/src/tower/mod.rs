//! Towers `M_d` over `Λ_d = Z_p[[t1..td]]` and their pro-characteristic
//! ideal.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::intpoly::IntPoly;
use crate::arith::ring::RingDescriptor;
use crate::arith::series::PolySeries;
use crate::charideal::{char_ideal, divisor_divides, divisor_mul, is_pseudo_null, project_divisor, CharDivisor, DivisorSummary};
use crate::error::{Error, Result};
use crate::modules::{direct_sum, quotient_by_t, t_torsion, ModuleJson, PresentedModule};

/// Levels `d0..=d_max`; level `d` lives over a ring with `d` variables, each
/// ring extending the previous one by its last variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tower {
    levels: Vec<PresentedModule>,
    d0: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerJson {
    pub p: u64,
    #[serde(rename = "N")]
    pub precision: u32,
    #[serde(rename = "D")]
    pub degree_cap: u32,
    pub d0: usize,
    pub levels: Vec<ModuleJson>,
}

impl Tower {
    pub fn new(levels: Vec<PresentedModule>, d0: usize) -> Result<Self> {
        if d0 == 0 {
            return Err(Error::Invalid("tower must start at level d0 >= 1".into()));
        }
        let Some(first) = levels.first() else {
            return Err(Error::Invalid("tower has no levels".into()));
        };
        let base = first.ring().clone();
        for (i, m) in levels.iter().enumerate() {
            let r = m.ring();
            if r.nvars() != d0 + i {
                return Err(Error::InvalidRing(format!(
                    "level {} has {} variables",
                    d0 + i,
                    r.nvars()
                )));
            }
            if r.p() != base.p() || r.precision() != base.precision() || r.degree_cap() != base.degree_cap() {
                return Err(Error::InvalidRing(format!("level {} changes p, N or D", d0 + i)));
            }
            if i > 0 && r.vars()[..r.nvars() - 1] != *levels[i - 1].ring().vars() {
                return Err(Error::InvalidRing(format!(
                    "level {} does not extend the ring of level {}",
                    d0 + i,
                    d0 + i - 1
                )));
            }
        }
        Ok(Tower { levels, d0 })
    }

    /// The tower of successive quotients `M_{d-1} = M_d / t_d M_d` below `top`.
    pub fn from_top(top: &PresentedModule, d0: usize) -> Result<Self> {
        let d = top.ring().nvars();
        if d0 == 0 || d0 > d {
            return Err(Error::Invalid(format!("d0 = {d0} outside 1..={d}")));
        }
        let mut levels = vec![top.clone()];
        for k in (d0..d).rev() {
            let next = quotient_by_t(levels.last().unwrap(), k)?;
            levels.push(next);
        }
        levels.reverse();
        Self::new(levels, d0)
    }

    /// `M_d = Λ_d / (f)` for `d = d0..=d_max`, with `f` taking one more
    /// variable at each level.
    pub fn constant(ring: &RingDescriptor, f: &IntPoly, d0: usize) -> Result<Self> {
        let d_max = ring.nvars();
        if f.nvars() != d_max {
            return Err(Error::RingMismatch);
        }
        let mut levels = Vec::new();
        for d in d0..=d_max {
            let mut r = ring.clone();
            let mut g = f.clone();
            for k in (d..d_max).rev() {
                if g.involves(k) {
                    return Err(Error::Invalid(format!("generator involves t{} below its level", k + 1)));
                }
                r = r.without_var(k)?;
                g = g.project(k);
            }
            levels.push(PresentedModule::cyclic(&r, vec![g])?);
        }
        Self::new(levels, d0)
    }

    pub fn d0(&self) -> usize {
        self.d0
    }

    pub fn d_max(&self) -> usize {
        self.d0 + self.levels.len() - 1
    }

    pub fn level(&self, d: usize) -> Result<&PresentedModule> {
        d.checked_sub(self.d0)
            .and_then(|i| self.levels.get(i))
            .ok_or_else(|| Error::Invalid(format!("no level {d}")))
    }

    pub fn levels(&self) -> &[PresentedModule] {
        &self.levels
    }

    pub fn ring(&self) -> &RingDescriptor {
        self.levels.last().unwrap().ring()
    }

    pub fn with_precision(&self, prec: u32, degree_cap: u32) -> Result<Self> {
        let levels = self
            .levels
            .iter()
            .map(|m| m.with_ring(&m.ring().with_precision(prec, degree_cap)?))
            .collect::<Result<Vec<_>>>()?;
        Self::new(levels, self.d0)
    }

    pub fn from_json(json: &TowerJson) -> Result<Self> {
        let mut levels = Vec::with_capacity(json.levels.len());
        for (i, lj) in json.levels.iter().enumerate() {
            let r = &lj.ring;
            if r.p != json.p || r.precision != json.precision || r.degree_cap != json.degree_cap {
                return Err(Error::InvalidRing(format!(
                    "level {} disagrees with the tower's p, N or D",
                    json.d0 + i
                )));
            }
            levels.push(PresentedModule::from_json(lj)?);
        }
        Self::new(levels, json.d0)
    }

    pub fn to_json(&self) -> TowerJson {
        let r = self.ring();
        TowerJson {
            p: r.p(),
            precision: r.precision(),
            degree_cap: r.degree_cap(),
            d0: self.d0,
            levels: self.levels.iter().map(PresentedModule::to_json).collect(),
        }
    }
}

/// Levelwise direct sum.
pub fn tower_sum(a: &Tower, b: &Tower) -> Result<Tower> {
    if a.d0 != b.d0 || a.levels.len() != b.levels.len() {
        return Err(Error::Invalid("towers cover different levels".into()));
    }
    let levels = a
        .levels
        .iter()
        .zip(&b.levels)
        .map(|(x, y)| direct_sum(x, y))
        .collect::<Result<Vec<_>>>()?;
    Tower::new(levels, a.d0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Hypothesis {
    /// The `t_d`-torsion of `M_d` is pseudo-null.
    Hyp1,
    /// `Ch(M_{d-1})` contains `Ch(M_d / t_d M_d)`.
    Hyp2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Defined,
    HypothesisFailed(usize, Hypothesis),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelReport {
    pub d: usize,
    pub ch: CharDivisor,
    /// Absent at `d0`.
    pub hyp1: Option<bool>,
    pub hyp2: Option<bool>,
    /// `Ch(M_d / t_d M_d)`.
    pub ch_quotient: Option<CharDivisor>,
    /// `π(ch_d) / ch_{d-1}` when the division is exact.
    pub cofactor: Option<CharDivisor>,
    pub coherent_exactly: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerReport {
    pub levels: Vec<LevelReport>,
    pub limit: CharDivisor,
    /// Generator of `limit` in the truncated model of `Λ_{d_max}`.
    pub limit_generator: PolySeries,
    pub verdict: Verdict,
}

impl TowerReport {
    pub fn is_defined(&self) -> bool {
        self.verdict == Verdict::Defined
    }

    pub fn summary(&self) -> TowerSummary {
        let (verdict, failed_level, failed_hypothesis) = match self.verdict {
            Verdict::Defined => ("defined", None, None),
            Verdict::HypothesisFailed(d, h) => ("hypothesis_failed", Some(d), Some(h)),
        };
        TowerSummary {
            verdict: verdict.into(),
            failed_level,
            failed_hypothesis,
            limit: self.limit.summary(),
            limit_generator: self.limit.generator().render(self.limit.ring().vars()),
            levels: self
                .levels
                .iter()
                .map(|l| LevelSummary {
                    d: l.d,
                    ch: l.ch.summary(),
                    hyp1: l.hyp1,
                    hyp2: l.hyp2,
                    ch_quotient: l.ch_quotient.as_ref().map(CharDivisor::render),
                    cofactor: l.cofactor.as_ref().map(CharDivisor::render),
                    coherent_exactly: l.coherent_exactly,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerSummary {
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_level: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_hypothesis: Option<Hypothesis>,
    pub limit: DivisorSummary,
    pub limit_generator: String,
    pub levels: Vec<LevelSummary>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelSummary {
    pub d: usize,
    pub ch: DivisorSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hyp1: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hyp2: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ch_quotient: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cofactor: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coherent_exactly: Option<bool>,
}

struct LevelData {
    hyp1: bool,
    ch_quotient: CharDivisor,
}

fn level_data(m: &PresentedModule) -> Result<LevelData> {
    let k = m.ring().nvars() - 1;
    let (hyp1, ch_quotient) = rayon::join(
        || t_torsion(m, k).and_then(|x| is_pseudo_null(&x)),
        || quotient_by_t(m, k).and_then(|x| char_ideal(&x)),
    );
    Ok(LevelData {
        hyp1: hyp1?,
        ch_quotient: ch_quotient?,
    })
}

pub fn check_hypotheses(tower: &Tower, d: usize) -> Result<(bool, bool)> {
    if d <= tower.d0 || d > tower.d_max() {
        return Err(Error::Invalid(format!(
            "hypotheses are checked at levels {}..={}, got {d}",
            tower.d0 + 1,
            tower.d_max()
        )));
    }
    let data = level_data(tower.level(d)?)?;
    let below = char_ideal(tower.level(d - 1)?)?;
    Ok((data.hyp1, divisor_divides(&below, &data.ch_quotient)?))
}

/// `b / a` as a divisor when `a` divides `b`, both nonzero.
fn divisor_quotient(a: &CharDivisor, b: &CharDivisor) -> Result<Option<CharDivisor>> {
    if a.is_zero() || b.is_zero() || !divisor_divides(a, b)? {
        return Ok(None);
    }
    let q = b.poly_part().exact_div(a.poly_part()).expect("divisibility was checked");
    let pk = num_bigint::BigInt::from(a.ring().p()).pow(b.mu() - a.mu());
    CharDivisor::from_generator(a.ring(), &q.scale(&pk)).map(Some)
}

pub fn pro_char_ideal(tower: &Tower) -> Result<TowerReport> {
    let chs = tower
        .levels
        .par_iter()
        .map(char_ideal)
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let data = tower.levels[1..]
        .par_iter()
        .map(level_data)
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut levels = vec![LevelReport {
        d: tower.d0,
        ch: chs[0].clone(),
        hyp1: None,
        hyp2: None,
        ch_quotient: None,
        cofactor: None,
        coherent_exactly: None,
    }];
    let mut verdict = Verdict::Defined;
    for (i, LevelData { hyp1, ch_quotient }) in data.into_iter().enumerate() {
        let d = tower.d0 + i + 1;
        let (below, ch) = (&chs[i], &chs[i + 1]);
        let hyp2 = divisor_divides(below, &ch_quotient)?;
        if verdict == Verdict::Defined {
            if !hyp1 {
                verdict = Verdict::HypothesisFailed(d, Hypothesis::Hyp1);
            } else if !hyp2 {
                verdict = Verdict::HypothesisFailed(d, Hypothesis::Hyp2);
            }
        }
        let projected = project_divisor(ch, d - 1)?;
        let cofactor = divisor_quotient(below, &projected)?;
        let coherent_exactly = match &cofactor {
            Some(c) => c.is_one(),
            None => projected == *below,
        };
        levels.push(LevelReport {
            d,
            ch: ch.clone(),
            hyp1: Some(hyp1),
            hyp2: Some(hyp2),
            ch_quotient: Some(ch_quotient),
            cofactor,
            coherent_exactly: Some(coherent_exactly),
        });
    }
    let limit = chs.last().unwrap().clone();
    let limit_generator = PolySeries::from_intpoly(limit.ring(), &limit.generator());
    Ok(TowerReport {
        levels,
        limit,
        limit_generator,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicativityReport {
    /// `ch_d(T) = ch_d(T') * ch_d(T'')` per level.
    pub levelwise: Vec<bool>,
    /// When `T'` and `T''` are defined, so is `T`.
    pub implication_holds: bool,
}

impl MultiplicativityReport {
    pub fn holds(&self) -> bool {
        self.implication_holds && self.levelwise.iter().all(|&b| b)
    }
}

/// For `whole = sub ⊕ quo` levelwise.
pub fn multiplicativity_report(sub: &Tower, whole: &Tower, quo: &Tower) -> Result<MultiplicativityReport> {
    if tower_sum(sub, quo)? != *whole {
        return Err(Error::Invalid("middle tower is not the levelwise direct sum".into()));
    }
    let (a, (b, c)) = rayon::join(
        || pro_char_ideal(sub),
        || rayon::join(|| pro_char_ideal(whole), || pro_char_ideal(quo)),
    );
    let (a, b, c) = (a?, b?, c?);
    let levelwise = a
        .levels
        .iter()
        .zip(&b.levels)
        .zip(&c.levels)
        .map(|((x, y), z)| Ok(divisor_mul(&x.ch, &z.ch)? == y.ch))
        .collect::<Result<Vec<_>>>()?;
    let implication_holds = !(a.is_defined() && c.is_defined()) || b.is_defined();
    Ok(MultiplicativityReport {
        levelwise,
        implication_holds,
    })
}

pub fn multiplicativity_check(sub: &Tower, whole: &Tower, quo: &Tower) -> Result<bool> {
    Ok(multiplicativity_report(sub, whole, quo)?.holds())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse::parse_poly;

    fn ring(p: u64, d: usize) -> RingDescriptor {
        RingDescriptor::standard(p, 6, d, 12).unwrap()
    }

    fn poly(r: &RingDescriptor, s: &str) -> IntPoly {
        parse_poly(r, s).unwrap()
    }

    fn div(r: &RingDescriptor, s: &str) -> CharDivisor {
        CharDivisor::from_generator(r, &poly(r, s)).unwrap()
    }

    #[test]
    fn constant_tower_is_defined() {
        for p in [3u64, 5] {
            let r = ring(p, 4);
            let t = Tower::constant(&r, &poly(&r, &format!("{p} + t1")), 1).unwrap();
            assert_eq!(t.d_max(), 4);
            let rep = pro_char_ideal(&t).unwrap();
            assert_eq!(rep.verdict, Verdict::Defined);
            assert_eq!(rep.limit, div(&r, &format!("{p} + t1")));
            assert_eq!(rep.limit_generator.lift(), poly(&r, &format!("{p} + t1")));
            for l in &rep.levels[1..] {
                assert_eq!(l.coherent_exactly, Some(true));
                assert!(l.cofactor.as_ref().unwrap().is_one());
                assert_eq!(l.hyp1, Some(true));
                assert_eq!(l.hyp2, Some(true));
            }
            for d in 2..=4 {
                assert_eq!(check_hypotheses(&t, d).unwrap(), (true, true));
            }
        }
    }

    #[test]
    fn torsion_in_last_variable_fails_hyp1() {
        let r2 = ring(3, 2);
        let r1 = ring(3, 1);
        let t = Tower::new(
            vec![
                PresentedModule::cyclic(&r1, vec![poly(&r1, "3")]).unwrap(),
                PresentedModule::cyclic(&r2, vec![poly(&r2, "t2")]).unwrap(),
            ],
            1,
        )
        .unwrap();
        assert_eq!(check_hypotheses(&t, 2).unwrap().0, false);
        assert_eq!(pro_char_ideal(&t).unwrap().verdict, Verdict::HypothesisFailed(2, Hypothesis::Hyp1));
    }

    #[test]
    fn failing_torsion_pattern_in_tower_variables() {
        let r2 = ring(5, 2);
        let r1 = ring(5, 1);
        let t = Tower::new(
            vec![
                PresentedModule::cyclic(&r1, vec![poly(&r1, "25 + t1")]).unwrap(),
                PresentedModule::cyclic(&r2, vec![poly(&r2, "25 + t1 + t2")]).unwrap(),
            ],
            1,
        )
        .unwrap();
        assert_eq!(check_hypotheses(&t, 2).unwrap(), (true, true));
        let rep = pro_char_ideal(&t).unwrap();
        assert!(rep.is_defined());
        assert_eq!(rep.levels[1].ch_quotient.as_ref().unwrap(), &div(&r1, "25 + t1"));
    }

    #[test]
    fn unit_factors_are_stripped_per_level() {
        let r = ring(3, 3);
        let levels = (1..=3)
            .map(|d| {
                let rd = ring(3, d);
                PresentedModule::cyclic(&rd, vec![poly(&rd, &format!("(3 + t1)*(1 + t{d})"))]).unwrap()
            })
            .collect();
        let t = Tower::new(levels, 1).unwrap();
        let rep = pro_char_ideal(&t).unwrap();
        assert!(rep.is_defined());
        for l in &rep.levels {
            assert_eq!(l.ch, div(&ring(3, l.d), "3 + t1"));
        }
        assert_eq!(rep.limit, div(&r, "3 + t1"));
    }

    #[test]
    fn multiplicativity_examples() {
        let r = ring(3, 3);
        let a = Tower::constant(&r, &poly(&r, "3 + t1"), 1).unwrap();
        let b = Tower::constant(&r, &poly(&r, "3"), 1).unwrap();
        let trivial = Tower::new(
            a.levels().iter().map(|m| PresentedModule::zero(m.ring())).collect(),
            1,
        )
        .unwrap();
        let ab = tower_sum(&a, &b).unwrap();
        let rep = pro_char_ideal(&ab).unwrap();
        assert!(rep.is_defined());
        assert_eq!(rep.limit, div(&r, "3*(3 + t1)"));
        assert!(multiplicativity_check(&a, &ab, &b).unwrap());
        let at = tower_sum(&a, &trivial).unwrap();
        assert_eq!(pro_char_ideal(&at).unwrap().limit, pro_char_ideal(&a).unwrap().limit);
        assert!(multiplicativity_check(&a, &at, &trivial).unwrap());
        assert!(matches!(multiplicativity_check(&a, &a, &b), Err(Error::Invalid(_))));
    }

    #[test]
    fn filtration_independence() {
        let r = ring(3, 4);
        let f = poly(&r, "3 + t1 + t2*t3 + t4^2");
        let top = PresentedModule::cyclic(&r, vec![f.clone()]).unwrap();
        let perm = [0, 3, 2, 1];
        let g = f.permute(&perm);
        let top2 = PresentedModule::cyclic(&r, vec![g]).unwrap();
        let a = pro_char_ideal(&Tower::from_top(&top, 1).unwrap()).unwrap();
        let b = pro_char_ideal(&Tower::from_top(&top2, 1).unwrap()).unwrap();
        assert!(a.is_defined() && b.is_defined());
        assert_eq!(b.limit.generator().permute(&perm), a.limit.generator());
    }

    #[test]
    fn json_round_trip() {
        let r = ring(5, 3);
        let t = Tower::constant(&r, &poly(&r, "5 + t1"), 2).unwrap();
        let text = serde_json::to_string(&t.to_json()).unwrap();
        let back: TowerJson = serde_json::from_str(&text).unwrap();
        assert_eq!(Tower::from_json(&back).unwrap(), t);
        let mut bad = back.clone();
        bad.levels[0].ring.precision = 7;
        assert!(matches!(Tower::from_json(&bad), Err(Error::InvalidRing(_))));
    }

    #[test]
    fn level_rings_must_extend() {
        let r1 = ring(3, 1);
        let r3 = ring(3, 3);
        let levels = vec![PresentedModule::zero(&r1), PresentedModule::zero(&r3)];
        assert!(matches!(Tower::new(levels, 1), Err(Error::InvalidRing(_))));
        assert!(Tower::new(vec![PresentedModule::zero(&r1)], 0).is_err());
    }
}
