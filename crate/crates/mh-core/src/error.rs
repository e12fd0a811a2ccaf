use alloc::string::String;
use alloc::vec::Vec;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A component was built from inconsistent or out-of-range parameters.
    #[error("configuration error: {0}")]
    Config(String),

    /// An operation was called with an invalid argument.
    #[error("argument error: {0}")]
    Argument(String),

    /// An operation was called on a value that violates its contract.
    #[error("contract violation: {0}")]
    Contract(String),

    /// The chain reached (or was started at) a state with zero target mass.
    #[error("invalid chain state: log-target is -inf at {state:?}")]
    InvalidState { state: Vec<f64> },

    /// A gradient evaluation produced non-finite components.
    #[error("non-finite gradient at state {state:?}")]
    NonFiniteGradient { state: Vec<f64> },

    /// A transition-matrix column failed validation.
    #[error("transition matrix column {column} invalid: {reason}")]
    MatrixValidation { column: usize, reason: String },

    /// Power iteration failed to converge within the iteration cap.
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    ConvergenceFailure {
        iterations: usize,
        residual: f64,
        last_iterate: Vec<f64>,
    },

    /// A series with zero variance was passed to a correlation estimator.
    #[error("degenerate series: variance is zero, autocorrelation undefined")]
    DegenerateSeries,

    /// The request exceeds a documented capability limit.
    #[error("capability exceeded: {0}")]
    Capability(String),

    /// A value lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = core::result::Result<T, Error>;
