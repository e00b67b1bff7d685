//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid rational literal `{0}`")]
    InvalidRational(String),

    #[error("generator {index} is not orthogonal")]
    NonOrthogonalGenerator { index: usize },

    #[error("group closure exceeds cap of {cap} elements")]
    GroupTooLarge { cap: usize },

    #[error("tuple space of size {size} exceeds cap of {cap}; use sampled mode")]
    TupleSpaceTooLarge { size: u128, cap: u128 },

    #[error("malformed Cayley table: {0}")]
    MalformedCayleyTable(String),

    #[error("invalid group spec `{spec}`: {reason}")]
    InvalidGroupSpec { spec: String, reason: String },

    #[error("degenerate configuration: points 0..={0} are affinely dependent")]
    DegenerateConfiguration(usize),

    #[error("invalid configuration: field `{field}`: {reason}")]
    InvalidConfiguration { field: String, reason: String },

    #[error("invalid report: {0}")]
    InvalidReport(String),

    #[error("invalid experiment plan: field `{field}`: {reason}")]
    InvalidPlan { field: String, reason: String },

    #[error("failed to read `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// True for errors caused by a configured size cap rather than bad input.
    pub fn is_cap_violation(&self) -> bool {
        matches!(
            self,
            Error::GroupTooLarge { .. } | Error::TupleSpaceTooLarge { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
