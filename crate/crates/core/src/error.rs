use thiserror::Error;

/// Errors raised by the model builders, closed-form evaluators, the
/// eigensolver and the scaling fits.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("closed-form result requires degenerate lower levels (delta = 0), got delta = {0}")]
    NonDegenerateLevels(f64),

    #[error("basis dimension {dimension} exceeds the configured maximum {max}")]
    DimensionTooLarge { dimension: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("empty search grid: {0}")]
    EmptyGrid(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("no interior residual minimum on the coupling grid (minimum at R = {coupling})")]
    NoInteriorMinimum { coupling: f64 },

    #[error("degenerate rescaled range: {0}")]
    DegenerateRange(String),

    #[error("did not converge: {0}")]
    NoConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
