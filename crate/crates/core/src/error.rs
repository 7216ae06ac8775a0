//! Error vocabulary shared by the kernel and by downstream forcing notions.
//!
//! Every failure carries a stable machine-readable code (used by reports and
//! asserted in tests) plus a human-readable message. Library crates that build
//! on the kernel define their own error enums and convert into [`Failure`]
//! when they need to flow through kernel traits such as
//! [`crate::poset::DenseSet::refine`].

use std::fmt;

/// A failure with a stable code. This is the lingua franca between forcing
/// notions, dense-set refiners, and the report layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    /// Stable machine-readable code, e.g. `REFINER_VIOLATION`.
    pub code: &'static str,
    /// Human-readable context.
    pub message: String,
}

impl Failure {
    pub fn new(code: &'static str, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

impl std::error::Error for Failure {}

/// Errors raised by the poset kernel itself.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KernelError {
    /// Upward closure cannot be checked without an enumerated universe.
    #[error("UNIVERSE_REQUIRED: {0}")]
    UniverseRequired(String),
    /// A dense set's refiner returned a condition that is not a member or not
    /// below its input; the dense-set implementation is broken.
    #[error("REFINER_VIOLATION: {0}")]
    RefinerViolation(String),
    /// Operation requires a finite universe.
    #[error("NOT_FINITE: {0}")]
    NotFinite(String),
    /// More dense sets supplied than the run budget allows.
    #[error("BUDGET_EXCEEDED: {0}")]
    BudgetExceeded(String),
    /// Compatibility search exhausted its budget without a verdict.
    #[error("UNKNOWN: {0}")]
    Unknown(String),
    /// A name exceeds the configured rank bound.
    #[error("RANK_EXCEEDED: {0}")]
    RankExceeded(String),
    /// Text input could not be parsed.
    #[error("CONFIG_PARSE: {0}")]
    ConfigParse(String),
    /// A refiner failure propagated from a dense set.
    #[error("{0}")]
    Refine(Failure),
}

impl KernelError {
    /// The stable machine-readable code for this error.
    pub fn code(&self) -> &'static str {
        match self {
            KernelError::UniverseRequired(_) => "UNIVERSE_REQUIRED",
            KernelError::RefinerViolation(_) => "REFINER_VIOLATION",
            KernelError::NotFinite(_) => "NOT_FINITE",
            KernelError::BudgetExceeded(_) => "BUDGET_EXCEEDED",
            KernelError::Unknown(_) => "UNKNOWN",
            KernelError::RankExceeded(_) => "RANK_EXCEEDED",
            KernelError::ConfigParse(_) => "CONFIG_PARSE",
            KernelError::Refine(f) => f.code,
        }
    }
}

impl From<KernelError> for Failure {
    fn from(e: KernelError) -> Failure {
        match e {
            KernelError::Refine(f) => f,
            other => Failure::new(other.code(), other.to_string()),
        }
    }
}

impl From<Failure> for KernelError {
    fn from(f: Failure) -> KernelError {
        KernelError::Refine(f)
    }
}
