use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("alpha must satisfy -1/2 <= alpha < 1, got {0}")]
    InvalidAlpha(f64),

    #[error("lambda must be a finite positive number, got {0}")]
    InvalidLambda(f64),

    #[error("order n = {got} is below the minimum {min}")]
    OrderTooSmall { got: usize, min: usize },

    #[error("truncation order {got} exceeds the cap {cap}")]
    OrderTooLarge { got: usize, cap: usize },

    #[error("truncation orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("coefficient sequence has {have} terms, need at least {need}")]
    InsufficientCoefficients { need: usize, have: usize },

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
