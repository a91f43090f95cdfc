use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),
    /// A factor of a product vanished where it sits in a denominator.
    #[error("singularity in {what} at indices {indices:?}")]
    Singularity { what: String, indices: Vec<i64> },
    /// The requested representation needs bases of modulus < 1 that are not available.
    #[error("method unavailable: {0}")]
    MethodUnavailable(String),
    /// Parameters violate the modulus window of an identity.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// The leading coefficient of a recurrence step vanished.
    #[error("degenerate step: {0}")]
    Degenerate(String),
    /// Quadrature stopped at its node cap short of the accuracy the caller needs.
    #[error("quadrature not converged at {nodes} nodes per dimension (error estimate {err:.2e})")]
    NoConvergence { nodes: usize, err: f64 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown identity: {0}")]
    UnknownIdentity(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn singular(what: impl Into<String>, indices: &[i64]) -> Self {
        Error::Singularity { what: what.into(), indices: indices.to_vec() }
    }
}
