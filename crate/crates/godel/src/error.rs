use forcing_core::Failure;
use thiserror::Error;

/// Everything that can go wrong in this crate, with a stable code per kind.
#[derive(Debug, Error)]
pub enum GodelError {
    /// Coordinate selection with indices outside the contract.
    #[error("bad indices: {0}")]
    BadIndices(String),
    /// A term whose entries break the tag/reference discipline.
    #[error("malformed term: {0}")]
    MalformedTerm(String),
    /// The requested evaluation is too large for exhaustive semantics.
    #[error("scale exceeded: {0}")]
    ScaleExceeded(String),
    /// Unreadable input.
    #[error("{0}")]
    Config(String),
}

impl GodelError {
    pub fn code(&self) -> &'static str {
        match self {
            GodelError::BadIndices(_) => "BAD_INDICES",
            GodelError::MalformedTerm(_) => "MALFORMED_TERM",
            GodelError::ScaleExceeded(_) => "SCALE_EXCEEDED",
            GodelError::Config(_) => "CONFIG_PARSE",
        }
    }
}

impl From<GodelError> for Failure {
    fn from(e: GodelError) -> Self {
        Failure::new(e.code(), e.to_string())
    }
}
