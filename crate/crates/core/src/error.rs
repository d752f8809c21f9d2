use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("interval division by an interval containing zero")]
    DivisionByZero,

    #[error("invalid interval: lower endpoint exceeds upper endpoint")]
    InvalidInterval,

    #[error("truncation index {trunc} too small: tail factor is not below 1")]
    TruncationTooSmall { trunc: u32 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("ensemble {ensemble} requires {requirement}, got n = {n}")]
    Parity {
        ensemble: String,
        requirement: &'static str,
        n: u32,
    },

    #[error("limit tail ratio at k = {k} is not below 1; raise trunc_k")]
    TailRatio { k: u32 },

    #[error("interval enclosure too wide: {0}")]
    Blowup(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("unsupported field or ensemble realization: {0}")]
    Unrealizable(String),

    #[error("enumeration size {size} exceeds guard {guard}")]
    EnumerationGuard { size: u128, guard: u128 },

    #[error("could not certify within resource budget: {0}")]
    Budget(String),
}
