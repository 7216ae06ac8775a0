use forcing_core::Failure;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MeasureError {
    /// No listed open cover was small enough for the density construction.
    #[error("INSUFFICIENT_COVER: {0}")]
    InsufficientCover(String),

    /// An input cover violates its measure bound.
    #[error("PRECONDITION_MEASURE: {0}")]
    PreconditionMeasure(String),

    #[error("CONFIG_PARSE: {0}")]
    Config(String),
}

impl MeasureError {
    pub fn code(&self) -> &'static str {
        match self {
            MeasureError::InsufficientCover(_) => "INSUFFICIENT_COVER",
            MeasureError::PreconditionMeasure(_) => "PRECONDITION_MEASURE",
            MeasureError::Config(_) => "CONFIG_PARSE",
        }
    }
}

impl From<MeasureError> for Failure {
    fn from(e: MeasureError) -> Failure {
        Failure::new(e.code(), e.to_string())
    }
}
