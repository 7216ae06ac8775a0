use forcing_core::Failure;
use thiserror::Error;

/// Errors raised by the concrete forcing notions.
#[derive(Debug, Error)]
pub enum ClassicError {
    /// A density target cannot be reached from the given condition (frozen
    /// prefix conflict or a capacity bound would overflow).
    #[error("NOT_EXTENDABLE: {0}")]
    NotExtendable(String),

    /// A generic-object extraction asked for more bits than the certificate
    /// decided.
    #[error("UNDECIDED_BITS: only {decided} contiguous bits decided, {requested} requested")]
    UndecidedBits { decided: u64, requested: u64 },

    #[error("CONFIG_PARSE: {0}")]
    Config(String),
}

impl ClassicError {
    pub fn code(&self) -> &'static str {
        match self {
            ClassicError::NotExtendable(_) => "NOT_EXTENDABLE",
            ClassicError::UndecidedBits { .. } => "UNDECIDED_BITS",
            ClassicError::Config(_) => "CONFIG_PARSE",
        }
    }
}

impl From<ClassicError> for Failure {
    fn from(e: ClassicError) -> Failure {
        Failure::new(e.code(), e.to_string())
    }
}
