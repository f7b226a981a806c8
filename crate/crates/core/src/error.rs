use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),

    #[error("rank must be at least 2, got {0}")]
    RankTooSmall(usize),

    #[error("expected {expected} labels for rank {rank}, got {got}")]
    LabelCount { rank: usize, expected: usize, got: usize },

    #[error("tuple {0:?} is not p-dominant: uncrossed differences must be non-negative")]
    NotDominant(Vec<i64>),

    #[error("no such homogeneous bundle: crossed entry {0} is not an integer")]
    NoSuchBundle(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("order must be at least 1")]
    ZeroOrder,

    #[error("explicit coefficients out of scope: {0}")]
    OutOfScope(String),

    #[error("k = {k} is not excluded at order {l} through node {j}")]
    NotExcluded { k: i64, l: usize, j: usize },

    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }

    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, Error::InvariantViolation(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
