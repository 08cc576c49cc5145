use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Pentagonal indices start at 1; the constant term has no index.
    #[error("pentagonal index must be at least 1")]
    ZeroIndex,

    #[error("pentagonal exponent for index {0} does not fit in usize")]
    Overflow(u64),

    #[error("unknown derivation variant {0}; expected 1 or 2")]
    InvalidVariant(u8),

    #[error("variant {variant} has no tail at stage {stage}")]
    InvalidStage { variant: u8, stage: u64 },

    #[error(
        "refusing to enumerate partitions of {n}: limit is {limit} (use the recurrence instead)"
    )]
    EnumerationLimit { n: usize, limit: usize },

    #[error("root index {j} is not coprime to order {d}")]
    NotPrimitive { d: u64, j: i64 },

    #[error("root order must be at least 1")]
    ZeroRootOrder,

    #[error("could not decode series: {0}")]
    Decode(String),
}
