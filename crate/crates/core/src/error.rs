use thiserror::Error;

/// Errors raised by the engine.
///
/// [`Error::name`] gives the stable identifier printed by the CLI and mapped
/// to numeric codes by the C interface.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A probability level or other argument lies outside its admissible range.
    #[error("domain error: {0}")]
    Domain(String),

    /// A distribution or settings parameter failed validation at construction.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The stochastic-dominance premise of a monotonicity check does not hold.
    #[error("premise violated: {0}")]
    PremiseViolated(String),

    /// The requested point lies below the range of the comonotone sum.
    #[error("out of range: {0}")]
    OutOfRange(String),

    /// An iterative solver or the adaptive quadrature hit its cap.
    #[error("no convergence: {0}")]
    NonConvergence(String),
}

impl Error {
    pub fn name(&self) -> &'static str {
        match self {
            Error::Domain(_) => "DomainError",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::PremiseViolated(_) => "PremiseViolated",
            Error::OutOfRange(_) => "OutOfRange",
            Error::NonConvergence(_) => "NonConvergence",
        }
    }

    /// The message without the kind prefix that `Display` adds.
    pub fn detail(&self) -> &str {
        match self {
            Error::Domain(m)
            | Error::InvalidParameter(m)
            | Error::PremiseViolated(m)
            | Error::OutOfRange(m)
            | Error::NonConvergence(m) => m,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Checks `0 < p < 1`.
pub(crate) fn check_open_unit(name: &str, p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must lie in (0,1), got {p}")))
    }
}
