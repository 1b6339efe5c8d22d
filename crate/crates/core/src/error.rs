use thiserror::Error;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative method stopped before reaching its tolerance.
    #[error("{what} did not converge after {iterations} iterations (best estimate {best:e}, residual {residual:e})")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        best: f64,
        residual: f64,
    },

    /// The requested discretization does not fit the configured budget.
    #[error("capacity exceeded: dimension {dimension} exceeds budget {budget}")]
    Capacity { dimension: usize, budget: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

/// Rejects NaN and infinities with a domain error naming the argument.
pub(crate) fn require_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        domain(format!("{name} must be finite, got {value}"))
    }
}

pub(crate) fn require_positive(name: &str, value: f64) -> Result<()> {
    require_finite(name, value)?;
    if value > 0.0 {
        Ok(())
    } else {
        domain(format!("{name} must be positive, got {value}"))
    }
}
