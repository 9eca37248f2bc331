use thiserror::Error;

#[derive(Debug, Error)]
pub enum PolyError {
    #[error("budget exceeded after {0} pair reductions")]
    BudgetExceeded(u64),
    #[error("deadline reached after {0} pair reductions")]
    Timeout(u64),
    #[error("monomial order mismatch: {0} vs {1}")]
    OrderMismatch(String, String),
    #[error("variable list mismatch: {0}")]
    VariableMismatch(String),
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error("ideal does not have the expected structure: {0}")]
    StructureMismatch(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("malformed input: {0}")]
    Format(String),
    #[error(transparent)]
    Core(#[from] iwc_core::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl PolyError {
    /// Whether the failure only reflects exhausted resources.
    pub fn is_inconclusive(&self) -> bool {
        matches!(self, PolyError::BudgetExceeded(_) | PolyError::Timeout(_))
    }
}
