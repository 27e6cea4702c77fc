use thiserror::Error;

use crate::quat::Quaternion;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cannot invert the zero quaternion")]
    ZeroDivisor,

    #[error("not an imaginary unit: {0}")]
    NotImaginaryUnit(Quaternion),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("frame units are not orthogonal (|<I, J>| = {0:e})")]
    FrameNotOrthogonal(f64),

    #[error("split pairs were computed in different frames")]
    FrameMismatch,

    #[error("pole at {at} (from {origin})")]
    Pole { at: Quaternion, origin: String },

    #[error("the zero polynomial has no well-defined zero set")]
    ZeroPolynomial,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("evaluation failed at {at}: {reason}")]
    Evaluation { at: Quaternion, reason: String },
}

impl Error {
    /// True for errors raised by the mathematics (poles, degenerate inputs),
    /// as opposed to malformed input.
    pub fn is_domain_error(&self) -> bool {
        !matches!(self, Error::Parse(_))
    }
}
