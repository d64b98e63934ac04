use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element is not a unit")]
    NonUnit,
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("invalid variable: {0}")]
    BadVariable(String),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("value is indistinguishable from 0 at the working precision")]
    PrecisionExhausted,
    #[error("result is inconclusive at the working precision")]
    Inconclusive,
    #[error("computation needs monomials of degree >= {0}")]
    DegreeCapExceeded(u32),
    #[error("elementary generator {0} is a unit")]
    UnitGenerator(String),
    #[error("module is not torsion")]
    NonTorsion,
    #[error("module is not pseudo-null")]
    NotPseudoNull,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("finite quotient basis of size {0} exceeds the limit {1}")]
    SizeLimit(usize, usize),
    #[error("growth exponents did not stabilize: {0}")]
    Unstable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Errors caused by the finite (N, D) model rather than by the input.
    pub fn is_precision(&self) -> bool {
        matches!(
            self,
            Error::PrecisionExhausted | Error::Inconclusive | Error::DegreeCapExceeded(_)
        )
    }
}
