use thiserror::Error;

/// Errors shared by every module in this crate.
///
/// The split matters to callers: `InvalidInput` and `SequenceTooShort` are
/// caller mistakes, while the quadrature and series variants mean the
/// numerics could not certify the requested tolerance.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Adaptive integration ran out of budget. Carries the best estimate it
    /// reached and the error bound it could certify for that estimate.
    #[error("quadrature did not converge: best estimate {best:e} with error bound {bound:e} after {panels} panels")]
    QuadratureNoConvergence { best: f64, bound: f64, panels: usize },

    /// A weight evaluator produced NaN or infinity inside (0, 1).
    #[error("weight evaluated to a non-finite value at rho = {rho}")]
    NonFiniteEvaluation { rho: f64 },

    #[error("moment sequence too short: need index {required}, have {available}")]
    SequenceTooShort { required: usize, available: usize },

    /// A series needs more moments than the sequence holds to push its tail
    /// bound below the requested tolerance.
    #[error("series tail bound {tol:e} needs moments up to index {required}, only {available} available")]
    InsufficientMoments {
        tol: f64,
        required: usize,
        available: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
