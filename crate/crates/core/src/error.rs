use thiserror::Error;

use crate::arith::Field;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(i64, i64),
    #[error("weight {weight:?} is outside {domain}")]
    OutsideDomain { weight: Vec<i64>, domain: String },
    #[error("weight set is not saturated: {0:?} lies above a member but is missing")]
    NotSaturated(Vec<i64>),
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("grid of {0} points exceeds the 10^7 guard")]
    GridTooLarge(u128),
    #[error("closure dimension exceeded cap {0}")]
    CapExceeded(usize),
    #[error("malformed relation instance: {0}")]
    Malformed(String),
    #[error("rewrite exceeded {cap} steps on word {word}")]
    StepCapExceeded { cap: usize, word: String },
    #[error("termination measure did not decrease: {0}")]
    MeasureViolation(String),
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;
