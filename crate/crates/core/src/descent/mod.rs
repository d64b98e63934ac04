//! Descent along the last variable: the torsion, projection and quotient
//! divisors and the identity relating them.

use serde::{Deserialize, Serialize};

use crate::charideal::{char_ideal, divisor_mul, is_pseudo_null, module_rank, project_divisor, CharDivisor, DivisorSummary};
use crate::error::{Error, Result};
use crate::modules::{quotient_by_t, t_torsion, PresentedModule};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentReport {
    /// `Ch_A(M_t)`.
    pub ch_torsion: CharDivisor,
    /// `π(Ch_B(M))`.
    pub ch_projected: CharDivisor,
    /// `Ch_A(M/tM)`.
    pub ch_quotient: CharDivisor,
    /// `Ch_B(M)`.
    pub ch_module: CharDivisor,
    pub identity_holds: bool,
    pub zero_case: bool,
    /// Ranks of `M_t` and `M/tM` over `A`, recorded when a divisor vanishes.
    pub rank_info: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescentSummary {
    pub ch_module: DivisorSummary,
    pub ch_torsion: DivisorSummary,
    pub ch_projected: DivisorSummary,
    pub ch_quotient: DivisorSummary,
    pub identity_holds: bool,
    pub zero_case: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_info: Option<(usize, usize)>,
}

impl DescentReport {
    pub fn summary(&self) -> DescentSummary {
        DescentSummary {
            ch_module: self.ch_module.summary(),
            ch_torsion: self.ch_torsion.summary(),
            ch_projected: self.ch_projected.summary(),
            ch_quotient: self.ch_quotient.summary(),
            identity_holds: self.identity_holds,
            zero_case: self.zero_case,
            rank_info: self.rank_info,
        }
    }
}

pub fn descent_check(m: &PresentedModule, k: usize) -> Result<DescentReport> {
    let (full, (torsion, quotient)) = rayon::join(
        || char_ideal(m),
        || {
            rayon::join(
                || t_torsion(m, k),
                || quotient_by_t(m, k),
            )
        },
    );
    let ch_module = full?;
    let torsion = torsion?;
    let quotient = quotient?;
    let ch_projected = project_divisor(&ch_module, k)?;
    let (ch_torsion, ch_quotient) = rayon::join(|| char_ideal(&torsion), || char_ideal(&quotient));
    let (ch_torsion, ch_quotient) = (ch_torsion?, ch_quotient?);
    let any_zero = ch_torsion.is_zero() || ch_projected.is_zero() || ch_quotient.is_zero();
    let zero_case = ch_torsion.is_zero() && ch_projected.is_zero() && ch_quotient.is_zero();
    let rank_info = any_zero.then(|| (module_rank(&torsion), module_rank(&quotient)));
    let identity_holds = if zero_case {
        let (a, b) = rank_info.unwrap();
        a == b
    } else if any_zero {
        false
    } else {
        divisor_mul(&ch_torsion, &ch_projected)? == ch_quotient
    };
    Ok(DescentReport {
        ch_torsion,
        ch_projected,
        ch_quotient,
        ch_module,
        identity_holds,
        zero_case,
        rank_info,
    })
}

/// For pseudo-null `P`: whether `Ch_A(P_t) = Ch_A(P/tP)`.
pub fn pseudo_null_identity_check(p: &PresentedModule, k: usize) -> Result<bool> {
    if !is_pseudo_null(p)? {
        return Err(Error::NotPseudoNull);
    }
    let torsion = char_ideal(&t_torsion(p, k)?)?;
    let quotient = char_ideal(&quotient_by_t(p, k)?)?;
    Ok(torsion == quotient)
}

/// Decides pseudo-nullity of `M` from the torsion and quotient divisors over
/// `A`, assuming `M/tM` is torsion.
pub fn pseudo_null_via_descent(m: &PresentedModule, k: usize) -> Result<bool> {
    let quotient = char_ideal(&quotient_by_t(m, k)?)?;
    if quotient.is_zero() {
        return Err(Error::HypothesisViolated("M/tM is not a torsion module".into()));
    }
    if quotient.is_one() {
        return Ok(true);
    }
    let torsion = char_ideal(&t_torsion(m, k)?)?;
    Ok(torsion == quotient)
}
