use thiserror::Error;

/// Errors produced by the evaluators in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("index {index} out of range 0..={max}")]
    Range { index: usize, max: usize },

    #[error("infeasible budget: {0}")]
    Infeasible(String),

    #[error("integration did not converge after {subdivisions} subdivisions (estimate {estimate:e}, error {abs_error:e})")]
    IntegrationNonConvergence {
        estimate: f64,
        abs_error: f64,
        subdivisions: usize,
    },

    #[error(
        "fixed-point iteration did not converge in {iterations} iterations (last iterate {last:e})"
    )]
    FixedPointNonConvergence { last: f64, iterations: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
