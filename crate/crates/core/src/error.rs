use thiserror::Error;

use crate::relations::OrderViolation;

/// Errors raised by the toolkit. Verification failures are reported as
/// values (reports, witnesses), not through this type.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("alternative count {m} outside supported range {min}..={max}")]
    AlternativeRange { m: usize, min: usize, max: usize },

    #[error("voter count {n} outside supported range {min}..={max}")]
    VoterRange { n: usize, min: usize, max: usize },

    #[error("alternative {index} out of range for {m} alternatives")]
    UnknownAlternative { index: usize, m: usize },

    #[error("a pair needs two distinct alternatives, got {0} twice")]
    SamePair(usize),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("relation is not a weak order: {0}")]
    NotWeakOrder(OrderViolation),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("domain of {size} profiles exceeds the budget of {budget}")]
    Budget { size: u128, budget: u128 },

    #[error("social welfare function violates A1-A4 ({failed}); the construction needs an Arrovian input")]
    NotArrovian { failed: String },

    #[error("search incomplete: node budget {budget} exhausted after {nodes} nodes")]
    SearchIncomplete { nodes: u64, budget: u64 },

    #[error("invalid tri-partition of the naturals ({reason}), witness {witness}")]
    InvalidTriple { reason: &'static str, witness: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
