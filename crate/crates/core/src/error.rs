use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mode mismatch")]
    FieldModeMismatch,
    #[error("matrix is singular")]
    Singular,
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("unknown algebra {0:?}")]
    UnknownName(String),
    #[error("structure tensor is not a Lie algebra: {0}")]
    InvalidAlgebra(String),
    #[error("ambiguous catalog match: {0} and {1} share a fingerprint")]
    Ambiguous(String, String),
    #[error("no catalog candidate matches")]
    NoMatch,
    #[error("limit does not exist: transformed constant c_{{{i}{j}}}^{k} diverges")]
    NoLimit { i: usize, j: usize, k: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("malformed input: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
