use thiserror::Error;

/// Errors produced by model parsing, symbolic analysis and control search.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("node {0} is fixed to both 0 and 1")]
    ConflictingControl(String),

    #[error("enumeration of {count} states exceeds the limit of {limit}")]
    EnumerationOverflow { count: u128, limit: usize },

    #[error("operation requires a non-empty state set")]
    EmptySet,

    #[error("network has {n} nodes, above the explicit-state bound of {max}")]
    TooLarge { n: usize, max: usize },

    #[error("target set is not forward-closed in the restricted transition system")]
    NotForwardClosed,

    #[error("target is not an attractor of the admissible transition system")]
    NotAnAttractor,

    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
