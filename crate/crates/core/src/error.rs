use thiserror::Error;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("shape mismatch: {left_w}x{left_h} vs {right_w}x{right_h}")]
    Shape {
        left_w: usize,
        left_h: usize,
        right_w: usize,
        right_h: usize,
    },

    #[error("invalid image size: {0}")]
    Size(String),

    #[error("pgm parse error: {0}")]
    Pgm(#[from] PgmError),

    #[error("inverse transform left imaginary residue {residue:e} (limit {limit:e})")]
    NumericConsistency { residue: f64, limit: f64 },

    #[error("{context}: {source}")]
    Cell {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Param(msg.into())
    }

    /// True for errors caused by bad user-supplied parameters.
    pub fn is_param(&self) -> bool {
        match self {
            Error::Param(_) | Error::Size(_) | Error::Shape { .. } => true,
            Error::Cell { source, .. } => source.is_param(),
            _ => false,
        }
    }
}

/// Binary PGM decode failures. Each variant names the offending field.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PgmError {
    #[error("unsupported magic {0:?} (only P5 is accepted)")]
    UnsupportedMagic(String),
    #[error("header field `{0}` is missing")]
    MissingField(&'static str),
    #[error("header field `{field}` is not a number: {token:?}")]
    NonNumeric { field: &'static str, token: String },
    #[error("header field `{field}` out of range: {value}")]
    OutOfRange { field: &'static str, value: u64 },
    #[error("maxval {0} exceeds 255")]
    MaxvalTooLarge(u64),
    #[error("pixel payload truncated: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
