use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Gamma (or a Gamma-based quantity) evaluated at a non-positive integer.
    #[error("pole of the Gamma function at {0}")]
    Pole(f64),

    #[error("result overflows f64 for argument {0}")]
    Overflow(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Input outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no convergence after {iterations} iterations in {context}")]
    ConvergenceFailure { context: &'static str, iterations: usize },

    /// Series regime lost too many digits to cancellation.
    #[error("precision loss: cancellation factor {factor:.3e} exceeds budget {budget:.1e}")]
    PrecisionLoss { factor: f64, budget: f64 },

    #[error("lower hypergeometric parameter {0} is a non-positive integer")]
    ParameterCollision(f64),

    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("kernel eigenvalue {value:.3e} at index {index} is not safely positive")]
    PositivityViolation { index: usize, value: f64 },
}
