//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("zero has no inverse modulo p")]
    ZeroInverse,
    #[error("denominator is divisible by p")]
    ZeroDenominator,
    #[error("region bounds must be at least 1 (got U={u}, V={v})")]
    BadBounds { u: u64, v: u64 },
    #[error("polygon is not convex: {0}")]
    NotConvex(String),
    #[error("polygon leaves the box [0,U]x[0,V]: {0}")]
    OutOfBox(String),
    #[error("weight sequence too short: need {need} values, have {have}")]
    WeightTooShort { need: u64, have: usize },
    #[error("weight modulus {modulus} at index {index} exceeds 1")]
    WeightModulus { index: usize, modulus: f64 },
    #[error("leading coefficient is zero mod p")]
    ZeroLeadingCoeff,
    #[error("degree {d} too small, need at least {min}")]
    DegreeTooSmall { d: u64, min: u64 },
    #[error("work cap exceeded: {0}")]
    RangeTooLarge(String),
    #[error("no usable primes in [{lo}, {hi}] below p={p}")]
    EmptyPrimeSet { lo: u64, hi: u64, p: u64 },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("degree {0} out of range for this bound")]
    BadDegree(i64),
    #[error("Hoelder parameter k={0} out of range")]
    BadK(i64),
    #[error("character order {m} does not divide p-1 = {pm1}")]
    BadCharOrder { m: u64, pm1: u64 },
    #[error("character index {j} must lie in [1, {max}] (nonprincipal)")]
    BadCharIndex { j: u64, max: u64 },
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("config missing key `{0}`")]
    ConfigMissing(&'static str),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
