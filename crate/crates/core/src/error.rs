use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid deletion parameters: alpha={alpha}, beta={beta} (both must lie in the open interval (0, 1))")]
    InvalidParams { alpha: f64, beta: f64 },

    #[error("invalid bit value {0} (expected 0 or 1)")]
    InvalidBit(u8),

    #[error("cannot parse bit string from {0:?}")]
    ParseBits(String),

    #[error("length mismatch: {what} (expected {expected}, got {actual})")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("side-information of length {y_len} is longer than the source of length {x_len}")]
    SideInfoTooLong { x_len: usize, y_len: usize },

    #[error("y is not a subsequence of x under any deletion pattern")]
    Inconsistent,

    #[error("block length {n} exceeds the enumeration cap {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("{deletions} deletions exceed the decoder's supersequence cap {cap}")]
    DeletionCapExceeded { deletions: usize, cap: usize },

    #[error("sequence of length {len} is shorter than the burst length {b}")]
    TooShort { len: usize, b: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
