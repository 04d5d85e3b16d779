use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch in {op}: expected {expected}, got {got}")]
    DimensionMismatch {
        op: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("matrix is not of full row rank (rank {rank} < {rows})")]
    RankDeficient { rank: usize, rows: usize },

    #[error("matrix is not a right inverse of the given generator")]
    NotRightInverse,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("decoding failure: {0}")]
    DecodingFailure(String),

    #[error("basis map collides on the state support: {first:#x} and {second:#x} both map to {image:#x}")]
    SupportCollision { first: u64, second: u64, image: u64 },

    #[error("resource cap exceeded: {what} = {requested} > {cap}")]
    CapExceeded {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("malformed input: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn dims(op: &'static str, expected: usize, got: usize) -> Self {
        Error::DimensionMismatch { op, expected, got }
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
