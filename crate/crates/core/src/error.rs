use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of a function or model.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter set violates its positivity constraints.
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    /// Requested mode index is beyond the bound-state spectrum.
    #[error("spectrum exhausted: mode {index} requested but only {size} bound states exist")]
    SpectrumExhausted { index: usize, size: usize },

    /// Shifting the parameters leaves the admissible region.
    #[error("parameter exhausted: {0}")]
    ParameterExhausted(String),

    #[error("interpolation rule `{rule}` is not supported for the {model} model")]
    UnsupportedRule { rule: &'static str, model: &'static str },

    /// The initial profile is not integrable against `phi_n / phi_0`.
    #[error("projection diverged for mode {index}: {reason}")]
    ProjectionDivergence { index: usize, reason: String },

    /// The interpolated solution has zero total weight and cannot be normalized.
    #[error("vanishing normalization denominator at s = {s}: (1-s)c_0 + s*phase*sqrt(lambda_1)*c_1 = 0")]
    VanishingDenominator { s: f64 },

    #[error("integration failed: {0}")]
    Integration(String),

    #[error("tridiagonal solve failed at row {row}")]
    Solver { row: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("empty ensemble")]
    EmptyEnsemble,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
