use alloc::string::String;

/// Errors raised by the clustering and boosting routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("need at least 2 items, got {0}")]
    TooFewItems(usize),
    #[error("pair ({i}, {j}) is not a valid upper-triangle pair for n = {n}")]
    InvalidPair { i: usize, j: usize, n: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("condensed data of length {len} does not match any item count")]
    BadCondensedLength { len: usize },
    #[error("entry {index} is not a finite nonnegative dissimilarity: {value}")]
    BadDissimilarity { index: usize, value: f64 },
    #[error("non-finite value at row {row}, column {column}")]
    NonFinite { row: usize, column: usize },
    #[error("data shape {rows}x{cols} does not match {len} values")]
    BadShape {
        rows: usize,
        cols: usize,
        len: usize,
    },
    #[error("cannot draw {requested} distinct samples from {available}")]
    SampleTooLarge { requested: usize, available: usize },
    #[error("invalid weight {value} at index {index}")]
    BadWeight { index: usize, value: f64 },
    #[error("index {index} out of range for {n} items")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("malformed dendrogram: {0}")]
    BadDendrogram(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
