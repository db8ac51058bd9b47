use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid grid spec: {0}")]
    InvalidSpec(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// A (mode, dimension) pair for which no explicit construction or formula exists.
    #[error("not covered by a closed form: {0}")]
    Unsupported(String),

    #[error("enumeration cap exceeded: {n} vertices > {cap}")]
    TooLarge { n: usize, cap: usize },

    #[error("unknown format `{0}`")]
    UnknownFormat(String),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}
