use thiserror::Error;

/// Errors raised by chart, model, solver and spectrum operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A point, parameter or quantum number lies outside the admissible domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The configuration matrix has vanishing determinant.
    #[error("singular matrix")]
    SingularMatrix,

    /// The requested model / chart / source combination is not supported.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The energy lies below the bottom of the effective well.
    #[error("no classical motion: energy {energy} below well minimum {minimum}")]
    NoMotion { energy: f64, minimum: f64 },

    /// A derivative was requested on a non-differentiable locus.
    #[error("not differentiable: {0}")]
    NonDifferentiable(String),

    /// A numerical solver failed to converge.
    #[error("solver failure: {0}")]
    Solver(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
