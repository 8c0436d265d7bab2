//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown Carter class `{0}` for type {1}")]
    UnknownCarterClass(String, String),

    #[error("{what} has order {order}, exceeding the enumeration cap {cap}")]
    TooLarge {
        what: String,
        order: u128,
        cap: u128,
    },

    #[error("q = {0} is not a prime power")]
    NotPrimePower(u64),

    #[error("residue characteristic {0} is not supported here: {1}")]
    BadCharacteristic(u64, String),

    #[error("no shipped field table for q = {0}")]
    NoFieldTable(u64),

    #[error("depth {0} out of range for this model")]
    DepthOutOfRange(String),

    #[error("class functions live on different domains")]
    DomainMismatch,

    #[error("character is not trivial on the required congruence kernel")]
    DepthMismatch,

    #[error("character table verification failed: {0}")]
    TableVerification(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
