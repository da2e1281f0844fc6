use thiserror::Error;

/// Errors produced by the special-function kernel, the model catalog and the
/// diversity/Monte Carlo layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {function}: {detail}")]
    Domain {
        function: &'static str,
        detail: String,
    },

    #[error("invalid {model} parameter: {detail}")]
    InvalidParameter { model: &'static str, detail: String },

    #[error("{what} is not available for the {model} model")]
    Unsupported { model: &'static str, what: &'static str },

    #[error("quadrature did not converge: partial result {partial:e}, error estimate {error_estimate:e}")]
    Quadrature { partial: f64, error_estimate: f64 },

    #[error("{function} did not converge after {iterations} iterations")]
    NoConvergence {
        function: &'static str,
        iterations: usize,
    },

    #[error("result of {function} overflows f64 (log value {log_value})")]
    Overflow { function: &'static str, log_value: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("diversity bound unavailable: branch {branch} ({model}) has no approximation error function")]
    MissingBranchBound { branch: usize, model: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        function,
        detail: detail.into(),
    }
}
