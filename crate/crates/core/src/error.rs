use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is neither 0 nor a prime")]
    InvalidCharacteristic(u32),

    #[error("malformed fibre: {0}")]
    MalformedFibre(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("inconsistent fibre data: m = {m}, nu = {nu}, p = {p}")]
    InconsistentFibre { m: u64, nu: u64, p: u32 },

    #[error("oracle bound exceeded: {needed} combinations > {bound}")]
    OracleBoundExceeded { needed: u128, bound: u128 },

    #[error("inadmissible type: {}", .0.join(", "))]
    Inadmissible(Vec<String>),

    #[error("inconsistent invariants: {0}")]
    InconsistentInvariants(String),

    #[error("unknown predicate '{0}'")]
    UnknownPredicate(String),

    #[error("invalid group data: {0}")]
    InvalidGroupData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
