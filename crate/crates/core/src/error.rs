use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("reflector stack is full (dimension {dim})")]
    StackFull { dim: usize },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("matrix is not positive semidefinite (reconstruction error {residual:e})")]
    NotPsd { residual: f64 },

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("matrix is zero")]
    ZeroMatrix,

    #[error("vector is zero")]
    ZeroVector,

    #[error("only {available} numerically nonzero directions, {requested} requested")]
    RankDeficient { requested: usize, available: usize },

    #[error(
        "target explained variance {target} unreachable with {max_dim} directions (best {best})"
    )]
    Unreachable {
        target: f64,
        max_dim: usize,
        best: f64,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid truncation rule: {0}")]
    InvalidRule(String),

    #[error("every entry fell below the threshold {threshold}")]
    AllEntriesTruncated { threshold: f64 },

    #[error("round {round}: {source}")]
    Round {
        round: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("subspace collapsed at round {round}: no projection columns left")]
    RankCollapse { round: usize },

    #[error("total orthogonality needs at least two loadings")]
    UndefinedForSingleLoading,

    #[error("embedded asset {name} failed its checksum")]
    AssetCorrupt { name: &'static str },

    #[error("{path}: parse error at row {row}, column {column}: {message}")]
    Parse {
        path: PathBuf,
        row: usize,
        column: usize,
        message: String,
    },

    #[error("{path}: row {row} has {found} fields, expected {expected}")]
    RaggedRows {
        path: PathBuf,
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
}

impl Error {
    /// Short stable name of the variant, used for CLI diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NonFinite { .. } => "NonFinite",
            Error::StackFull { .. } => "StackFull",
            Error::NotSymmetric { .. } => "NotSymmetric",
            Error::NotPsd { .. } => "NotPsd",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::ZeroMatrix => "ZeroMatrix",
            Error::ZeroVector => "ZeroVector",
            Error::RankDeficient { .. } => "RankDeficient",
            Error::Unreachable { .. } => "Unreachable",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::InvalidRule(_) => "InvalidRule",
            Error::AllEntriesTruncated { .. } => "AllEntriesTruncated",
            Error::Round { source, .. } => source.name(),
            Error::RankCollapse { .. } => "RankCollapse",
            Error::UndefinedForSingleLoading => "UndefinedForSingleLoading",
            Error::AssetCorrupt { .. } => "AssetCorrupt",
            Error::Parse { .. } => "ParseError",
            Error::RaggedRows { .. } => "RaggedRows",
            Error::Io { .. } => "IoError",
        }
    }

    pub(crate) fn in_round(self, round: usize) -> Error {
        match self {
            e @ Error::Round { .. } => e,
            e => Error::Round {
                round,
                source: Box::new(e),
            },
        }
    }
}
