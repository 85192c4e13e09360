use thiserror::Error;

/// Errors raised by the numerical laboratory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("eigensolver failed to converge on eigenvalue {index} after {iterations} iterations")]
    EigenNoConvergence { index: usize, iterations: usize },

    #[error("eigensolver residual {residual:e} exceeds bound {bound:e}")]
    EigenResidual { residual: f64, bound: f64 },

    #[error("matrix exponential failed: {0}")]
    MatrixExponential(String),

    #[error("singular matrix encountered in {0}")]
    Singular(&'static str),

    #[error("no sign change in bracket [{lo}, {hi}] (f(lo) = {f_lo}, f(hi) = {f_hi})")]
    NoBracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("root finder did not converge within {iterations} iterations")]
    RootNoConvergence { iterations: usize },

    #[error("quadrature did not reach tolerance {tol:e} (estimate {estimate:e})")]
    Quadrature { tol: f64, estimate: f64 },

    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),

    #[error("operation requires the ordered phase (Gamma/J < 1), got Gamma/J = {0}")]
    DisorderedPhase(f64),

    #[error("susceptibility estimate is not linear: step {step:e} gives {coarse}, half step gives {fine}")]
    Nonlinear { step: f64, coarse: f64, fine: f64 },

    #[error("too few first passages: {observed} observed, {required} required; use smaller N or higher T")]
    TooFewPassages { observed: usize, required: usize },

    #[error("barrier exponent {exponent:.3} exceeds the desk-scale limit {limit}")]
    BarrierTooHigh { exponent: f64, limit: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
