use thiserror::Error;

/// Errors raised by the simulator library.
#[derive(Debug, Error)]
pub enum Error {
    /// A state failed one of its normalization or positivity constraints.
    #[error("state violates {constraint} (residual {residual:e})")]
    StateViolation {
        constraint: &'static str,
        residual: f64,
    },

    /// An argument lies outside the domain of the operation.
    #[error("{0}")]
    Domain(String),

    #[error("time grid is not ascending at index {index}")]
    NonMonotoneGrid { index: usize },

    #[error("{0} is empty")]
    Empty(&'static str),

    #[error("integration step {step:e} exceeds the allowed maximum {limit:e}")]
    StepTooCoarse { step: f64, limit: f64 },

    #[error("adaptive quadrature did not converge on [{a}, {b}] (error estimate {estimate:e})")]
    Quadrature { a: f64, b: f64, estimate: f64 },

    #[error("non-finite value encountered at t = {t}: {what}")]
    NonFinite { t: f64, what: String },

    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("series has {len} samples; at least {min} required")]
    TooShort { len: usize, min: usize },

    #[error("sample {index}: {source}")]
    Sample {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
