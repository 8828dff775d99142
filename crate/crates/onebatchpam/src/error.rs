//! Crate-wide error type.

use std::path::PathBuf;

/// Errors produced by dataset handling, sampling, and the clustering
/// algorithms.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A file could not be read or written.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A CSV cell failed to parse. `line` is the 1-based line in the file
    /// (header included), `column` the 0-based column index.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// The dataset contains no data rows.
    #[error("dataset is empty")]
    EmptyDataset,

    /// A synthetic-data specification is invalid.
    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),

    /// Two points of different dimension were compared.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// Cosine dissimilarity is undefined for the zero vector.
    #[error("cosine dissimilarity is undefined for a zero vector")]
    ZeroVector,

    /// A row index is out of range.
    #[error("index {index} out of range (n = {bound})")]
    IndexOutOfRange { index: usize, bound: usize },

    /// The requested batch size is impossible for the strategy.
    #[error("invalid batch size m = {m} for n = {n}: {reason}")]
    InvalidBatchSize { m: usize, n: usize, reason: String },

    /// Inputs to the minimum-batch-size bound are out of range.
    #[error("invalid bound inputs: {0}")]
    InvalidBound(String),

    /// A batch objective estimate is not finite.
    #[error("batch objective estimate is not finite")]
    NonFinite,

    /// The requested number of medoids is impossible.
    #[error("invalid k = {k} for n = {n}")]
    InvalidK { k: usize, n: usize },

    /// Debiased batches make the k = 1 estimate infinite.
    #[error("the debias strategy requires k >= 2")]
    DebiasRequiresKAtLeast2,

    /// A swap candidate is already a medoid.
    #[error("candidate row {row} is already a medoid")]
    CandidateIsMedoid { row: usize },

    /// An algorithm or experiment configuration is invalid.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// The reference objective for a relative-objective ratio is zero.
    #[error("best objective is zero; delta relative objective is undefined")]
    ZeroBestObjective,

    /// The reference time for a relative-time ratio is zero.
    #[error("reference time is zero; relative time is undefined")]
    ZeroReferenceTime,

    /// An experiment cell failed; wraps the underlying error with the cell id.
    #[error("cell (algorithm = {algorithm}, k = {k}, seed = {seed}) failed: {source}")]
    Cell {
        algorithm: String,
        k: usize,
        seed: u64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// True for errors caused by bad user input (flags, config files,
    /// parameter values) rather than by a failure at run time. The CLI maps
    /// these to exit code 1 and everything else to exit code 2.
    pub fn is_config_error(&self) -> bool {
        match self {
            Error::InvalidSpec(_)
            | Error::InvalidBatchSize { .. }
            | Error::InvalidBound(_)
            | Error::InvalidK { .. }
            | Error::DebiasRequiresKAtLeast2
            | Error::InvalidConfig(_) => true,
            Error::Cell { source, .. } => source.is_config_error(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
