use thiserror::Error;

use crate::seqcalc::DepthCertificate;

#[derive(Debug, Error)]
pub enum Error {
    /// A difference or row needs more terms than the sequence carries.
    #[error("index out of range: need depth {required}, sequence has depth {available}")]
    Index { required: usize, available: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Input failed a certification that the operation requires.
    #[error("invalid input: {what} failed at depth {}", .certificate.depth)]
    NotCertified {
        what: &'static str,
        certificate: DepthCertificate,
    },

    /// Φ(1) differs from 1; rescale drift and weights by `1 / phi_one`.
    #[error("laplace exponent is not normalized: phi(1) = {phi_one}")]
    Normalization { phi_one: crate::Rational },

    #[error("n = {n} exceeds the enumeration cap {cap}")]
    Resource { n: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
