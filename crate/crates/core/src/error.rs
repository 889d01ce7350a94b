use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the statistics, table and simulation layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("sample is empty")]
    EmptySample,

    #[error("non-finite coordinate at pair {index}")]
    NonFinite { index: usize },

    #[error("x and y have different lengths ({x} vs {y})")]
    LengthMismatch { x: usize, y: usize },

    #[error("tied values in {axis} (continuity assumption violated)")]
    TiesPresent { axis: Axis },

    #[error("not a permutation of 1..={n}: {reason}")]
    InvalidPermutation { n: usize, reason: String },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("{what} = {value} is out of range ({expected})")]
    OutOfRange {
        what: &'static str,
        value: String,
        expected: String,
    },

    #[error("need at least {needed} observations, got {got}")]
    TooFewObservations { needed: usize, got: usize },

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    #[error("no exact null distribution for n = {n} (table covers n <= {n_max}) and no Tracy-Widom fallback supplied")]
    MissingTableRow { n: usize, n_max: usize },

    #[error("malformed table at line {line}: {reason}")]
    MalformedTable { line: usize, reason: String },

    #[error("row n = {n}: counts sum to {found}, expected n! = {expected}")]
    RowSumMismatch {
        n: usize,
        found: String,
        expected: String,
    },

    #[error("table checksum mismatch: file says {expected}, contents hash to {found}")]
    ChecksumMismatch { expected: String, found: String },

    #[error("Painleve II integration unstable near z = {z}: {reason}")]
    Unstable { z: f64, reason: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Which coordinate of a paired sample an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Axis::X => f.write_str("x"),
            Axis::Y => f.write_str("y"),
        }
    }
}

impl Error {
    pub(crate) fn out_of_range(
        what: &'static str,
        value: impl ToString,
        expected: impl ToString,
    ) -> Self {
        Error::OutOfRange {
            what,
            value: value.to_string(),
            expected: expected.to_string(),
        }
    }

    /// True for failures of the numerical machinery itself rather than of
    /// the caller's input.
    pub fn is_numeric_failure(&self) -> bool {
        matches!(self, Error::Unstable { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
