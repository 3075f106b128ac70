use thiserror::Error;

/// Failures reported by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the requested function.
    #[error("domain error in {func}: {reason}")]
    Domain { func: &'static str, reason: String },

    /// The result (or a required intermediate) is not representable as an `f64`.
    #[error("overflow in {func}: {reason}")]
    Overflow { func: &'static str, reason: String },

    /// A series, continued fraction or quadrature exhausted its budget.
    #[error("{func} did not converge after {iterations} iterations")]
    NonConvergence {
        func: &'static str,
        iterations: usize,
    },
}

impl Error {
    pub(crate) fn domain(func: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            func,
            reason: reason.into(),
        }
    }

    pub(crate) fn overflow(func: &'static str, reason: impl Into<String>) -> Self {
        Error::Overflow {
            func,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
