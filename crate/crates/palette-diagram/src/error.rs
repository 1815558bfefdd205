use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by ingestion, graph construction, embedding, and rendering.
#[derive(Debug, Error)]
pub enum PaletteError {
    #[error("input contains no data rows")]
    EmptyInput,

    #[error("negative value {value} at row {row}, column {col}")]
    NegativeValue { row: usize, col: usize, value: f64 },

    #[error("row {row} has {found} fields, expected {expected}")]
    RaggedRows {
        row: usize,
        found: usize,
        expected: usize,
    },

    #[error("field at row {row}, column {col} is not numeric: {text:?}")]
    NotNumeric {
        row: usize,
        col: usize,
        text: String,
    },

    #[error("input is not valid UTF-8")]
    InvalidUtf8,

    #[error("malformed JSON document: {0}")]
    MalformedDocument(String),

    #[error("row {0} sums to zero and cannot be normalized")]
    ZeroRow(usize),

    #[error("neighbor count {k} outside valid range 1..={max}")]
    BadK { k: usize, max: usize },

    #[error("graph is disconnected: node {to} is unreachable from node {from}")]
    Disconnected { from: usize, to: usize },

    #[error("all pairwise distances are zero")]
    DegenerateDistances,

    #[error("dimension mismatch: got {got}, expected {expected}")]
    DimensionMismatch { got: usize, expected: usize },

    #[error("degenerate spectrum: top eigenvalue {0:e} is not positive")]
    DegenerateSpectrum(f64),

    #[error("need at least {min} datasets, got {n}")]
    TooFewPoints { n: usize, min: usize },

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("invalid diagram style: {0}")]
    InvalidStyle(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl PaletteError {
    /// Stable machine-readable name of the error variant, used in CLI
    /// diagnostics and the C API.
    pub fn name(&self) -> &'static str {
        match self {
            PaletteError::EmptyInput => "EmptyInput",
            PaletteError::NegativeValue { .. } => "NegativeValue",
            PaletteError::RaggedRows { .. } => "RaggedRows",
            PaletteError::NotNumeric { .. } => "NotNumeric",
            PaletteError::InvalidUtf8 => "InvalidUtf8",
            PaletteError::MalformedDocument(_) => "MalformedDocument",
            PaletteError::ZeroRow(_) => "ZeroRow",
            PaletteError::BadK { .. } => "BadK",
            PaletteError::Disconnected { .. } => "Disconnected",
            PaletteError::DegenerateDistances => "DegenerateDistances",
            PaletteError::DimensionMismatch { .. } => "DimensionMismatch",
            PaletteError::DegenerateSpectrum(_) => "DegenerateSpectrum",
            PaletteError::TooFewPoints { .. } => "TooFewPoints",
            PaletteError::InvalidParams(_) => "InvalidParams",
            PaletteError::InvalidStyle(_) => "InvalidStyle",
            PaletteError::Io { .. } => "Io",
        }
    }
}

pub type Result<T> = std::result::Result<T, PaletteError>;
