use thiserror::Error;

/// Failure modes shared by the solvers and planners.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid {field}: {reason}")]
    InvalidInput { field: &'static str, reason: String },

    #[error("oscillating field ratio {eps} must stay below 1 so the barrier slope keeps its sign")]
    FieldRatioTooLarge { eps: f64 },

    #[error(
        "no field-minimum saddle at u = {u}, eps = {eps}: beyond the two-root existence window \
         (max of tau - eps*sinh(tau) is {peak}, needs >= u)"
    )]
    NoSaddle { u: f64, eps: f64, peak: f64 },

    #[error("no resonant amplitude for u = {u}: {detail}")]
    NoResonance { u: f64, detail: String },

    #[error("{what} did not converge after {iterations} iterations (bracket [{lo}, {hi}])")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        lo: f64,
        hi: f64,
    },

    #[error("{what} is outside its validity window: {detail}")]
    OutOfValidity { what: &'static str, detail: String },

    #[error("quadrature needs an odd number of at least {required} uniform samples, got {got}")]
    InsufficientSamples { required: usize, got: usize },

    #[error("fixed-point iteration for {what} did not converge; trace: {trace:?}")]
    FixedPoint { what: &'static str, trace: Vec<f64> },
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidInput {
            field,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
