use thiserror::Error;

/// Failure modes shared by every module of the crate.
///
/// Each variant names the precondition that was violated so the CLI can
/// surface it as a one-line diagnostic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate element {0}")]
    DuplicateElement(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("set too small: need at least {needed} elements, got {got}")]
    TooSmall { needed: usize, got: usize },
    #[error("denominator {q} must exceed N = {n} so that the orbit points are distinct")]
    InsufficientDenominator { q: String, n: u64 },
    #[error("point collision: {0}")]
    Collision(String),
    #[error("subset violation: {0} is not an element of the ambient set")]
    SubsetViolation(String),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("premise C-B = B-B violated: difference {0} is not covered")]
    PremiseViolation(String),
    #[error("{0} is not an element of B-B")]
    NotAMember(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("construction undefined: {0}")]
    Undefined(String),
}

pub type Result<T> = std::result::Result<T, Error>;
