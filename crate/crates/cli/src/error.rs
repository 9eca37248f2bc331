use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] iwc_core::Error),
    #[error(transparent)]
    Poly(#[from] iwc_polysys::PolyError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// Process exit code: 2 for bad input, 3 when only resources ran out.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Poly(e) if e.is_inconclusive() => 3,
            _ => 2,
        }
    }
}
