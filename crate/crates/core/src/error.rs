use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid dimension vector: {0}")]
    InvalidDims(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("group element is not invertible at vertex {0}")]
    NotInvertible(usize),
    #[error("group element is not orthogonal at vertex {0}")]
    NotOrthogonal(usize),
    #[error("rejection budget of {0} draws exhausted")]
    RejectionBudget(usize),
    #[error("invalid invariant label: {0}")]
    InvalidLabel(String),
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
    #[error("series head is not invertible")]
    NonInvertibleHead,
    #[error("series coefficient of exponent {0} lies beyond the truncation")]
    Truncation(i64),
    #[error("no monic solution at order {0}")]
    NoMonicSolution(usize),
    #[error("invalid series kind: {0}")]
    InvalidKind(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
