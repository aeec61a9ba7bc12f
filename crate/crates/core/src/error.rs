use thiserror::Error;

/// Errors raised by norm evaluation, quadrature and the diagnostics built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GlsError {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A required integrand or profile value was not finite.
    #[error("evaluation error at p = {at}: {detail}")]
    Evaluation { at: f64, detail: String },

    /// Adaptive quadrature hit its refinement limit before meeting the tolerance.
    #[error(
        "quadrature did not converge after {subintervals} subintervals \
         (best estimate {estimate}, error {error})"
    )]
    Convergence {
        estimate: f64,
        error: f64,
        subintervals: usize,
    },

    /// A structural precondition on inputs was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A numeric failure such as overflow.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// The requested quantity is singular at the given argument.
    #[error("singularity: {0}")]
    Singular(String),
}

pub type Result<T, E = GlsError> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> GlsError {
    GlsError::Domain(msg.into())
}

pub(crate) fn precondition(msg: impl Into<String>) -> GlsError {
    GlsError::Precondition(msg.into())
}
