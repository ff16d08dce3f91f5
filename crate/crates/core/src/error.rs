use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("prime {0} is too large for machine-word valuation arithmetic")]
    PrimeTooLarge(u64),
    #[error("base {0} must be at least 2")]
    BaseTooSmall(u64),
    #[error("invalid type: {0}")]
    InvalidType(String),
    #[error("invalid window [{lo}, {hi}]")]
    InvalidWindow { lo: u32, hi: u32 },
    #[error("degree class {0} occurs more than once; merge equal degrees first")]
    DuplicateClass(u32),
    #[error("condition needs at least two degree classes, found {0}")]
    TooFewClasses(usize),
    #[error("class index {index} out of range for {len} classes")]
    ClassIndex { index: usize, len: usize },
    #[error("k_max = {k_max} must be at least max(p, k0) = {needed}")]
    OracleRangeTooSmall { k_max: u64, needed: u64 },
    #[error("Adem expansion of P^{a} P^{b} requested but the word is admissible at p = {p}")]
    AlreadyAdmissible { a: u32, b: u32, p: u32 },
    #[error("relation shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("rule premise failed: {0}")]
    RulePremise(String),
}

pub type Result<T> = std::result::Result<T, Error>;
