use forcing_core::Failure;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PrikryError {
    /// A handle combination left the closed algebra (modulus or window cap).
    #[error("subset undecidable: {0}")]
    SubsetUndecidable(String),
    /// The measure oracle has no verdict for a set it was asked about.
    #[error("oracle undecided: {0}")]
    OracleUndecided(String),
    /// Logged or probed answers violate the filter laws; carries witnesses.
    #[error("oracle inconsistent: {0}")]
    OracleInconsistent(String),
    /// The family is too small for the requested homogeneous set.
    #[error("family too small: {0}")]
    FamilyTooSmall(String),
    #[error("{0}")]
    Config(String),
}

impl PrikryError {
    pub fn code(&self) -> &'static str {
        match self {
            PrikryError::SubsetUndecidable(_) => "SUBSET_UNDECIDABLE",
            PrikryError::OracleUndecided(_) => "ORACLE_UNDECIDED",
            PrikryError::OracleInconsistent(_) => "ORACLE_INCONSISTENT",
            PrikryError::FamilyTooSmall(_) => "FAMILY_TOO_SMALL",
            PrikryError::Config(_) => "CONFIG_PARSE",
        }
    }
}

impl From<PrikryError> for Failure {
    fn from(e: PrikryError) -> Failure {
        Failure::new(e.code(), e.to_string())
    }
}
