use thiserror::Error;

/// Errors shared by every module of the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A data file could not be parsed; `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    /// Structurally valid input that violates a documented invariant.
    #[error("validation error: {0}")]
    Validation(String),

    /// An operation was called outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// No design satisfies the active constraint set.
    #[error("{0}")]
    Infeasible(String),

    /// The relaxation solver diverged; the trace up to the failure is attached.
    #[error("solver unstable at t = {t_s:.6} s (kinetic energy {ke_j:.3e} J)")]
    SolverUnstable {
        t_s: f64,
        ke_j: f64,
        trace: Vec<crate::quasistatics::TraceSample>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
