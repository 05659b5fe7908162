use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("label {label} is outside 1..={m}")]
    LabelOutOfRange { label: usize, m: usize },

    #[error("number of marked points {0} is outside the supported range 1..={max}", max = crate::combinat::MAX_LABELS)]
    UnsupportedSize(usize),

    #[error("subset {{{subset}}} of {{1..{m}}} is not a valid divisor key: {reason}")]
    InvalidKey {
        subset: String,
        m: usize,
        reason: &'static str,
    },

    #[error("{what} needs at least {min} marked points, got {got}")]
    TooFewPoints {
        what: &'static str,
        min: usize,
        got: usize,
    },

    #[error("size mismatch: expected {expected} marked points, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("boundary index s={s} is outside 2..={n}")]
    IndexOutOfRange { s: usize, n: usize },

    #[error("parse error: {0}")]
    Parse(String),
}
