//! Crate-wide error type.

use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    /// Operator/state built on, or applied to, the wrong Hilbert space.
    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    /// A model mapping's preconditions do not hold (e.g. the Dirac form).
    #[error("invalid mapping: {0}")]
    InvalidMapping(String),

    #[error("invalid generator: not Hermitian (relative asymmetry {asymmetry:.3e})")]
    NonHermitianGenerator { asymmetry: f64 },

    #[error("integration failure: norm drift {drift:.3e} exceeds 1e-6; retry with a smaller dt")]
    IntegrationFailure { drift: f64 },

    #[error("Hamiltonian evaluator produced a non-finite entry at t = {t:.6e} s")]
    EvaluatorError { t: f64 },

    #[error("convergence failure: {0}")]
    ConvergenceFailure(String),

    #[error("postselection impossible: outcome `{outcome}` has probability {probability:.3e}")]
    PostselectionImpossible { outcome: String, probability: f64 },

    #[error("schedule segment {segment}: {source}")]
    Schedule { segment: usize, source: Box<Error> },

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("linear algebra backend error: {0}")]
    Linalg(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config { path: path.into(), message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
