use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Lie type: {0}")]
    InvalidType(String),

    #[error("unsupported type {ty}: {reason}")]
    UnsupportedType { ty: String, reason: String },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("invalid sign vector: {0}")]
    InvalidSignVector(String),

    #[error("{what} exceeds the configured cap ({size} > {cap})")]
    CapExceeded { what: String, size: usize, cap: usize },

    #[error("word {word:?} is not reduced (length {word_len}, element length {length})")]
    NonReducedWord { word: Vec<usize>, word_len: usize, length: usize },

    #[error("invalid q = {q}: {reason}")]
    InvalidQ { q: u64, reason: String },

    #[error("assumption violated: {0}")]
    AssumptionViolated(String),

    #[error("polynomial is not a perfect square: {0}")]
    NotAPerfectSquare(String),

    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,

    #[error("polynomial division is not exact")]
    InexactDivision,

    #[error("no constant fits the Hirota equation for tau_{k}: residual has {residual_terms} terms")]
    NoConstantFits { k: usize, residual_terms: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    #[error("zero-crossing count is grid-unstable: {coarse} crossings on the coarse grid, {fine} on the refined grid")]
    GridUnstable { coarse: usize, fine: usize },

    #[error("step size collapsed at t = {t} without divergence (suspected stiff region)")]
    StepCollapse { t: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed data at {path}: {reason}")]
    Corrupt { path: PathBuf, reason: String },
}

impl Error {
    /// True for errors caused by bad input rather than by a failed computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidType(_)
                | Error::UnsupportedType { .. }
                | Error::IndexOutOfRange { .. }
                | Error::InvalidSignVector(_)
                | Error::InvalidQ { .. }
                | Error::InvalidArgument(_)
                | Error::NonReducedWord { .. }
        )
    }

    /// Stable machine-readable code, used in CLI error documents.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidType(_) => "invalid-type",
            Error::UnsupportedType { .. } => "unsupported-type",
            Error::IndexOutOfRange { .. } => "index-out-of-range",
            Error::InvalidSignVector(_) => "invalid-sign-vector",
            Error::CapExceeded { .. } => "cap-exceeded",
            Error::NonReducedWord { .. } => "non-reduced-word",
            Error::InvalidQ { .. } => "invalid-q",
            Error::AssumptionViolated(_) => "assumption-violated",
            Error::NotAPerfectSquare(_) => "not-a-perfect-square",
            Error::ZeroPolynomial => "zero-polynomial",
            Error::InexactDivision => "inexact-division",
            Error::NoConstantFits { .. } => "no-constant-fits",
            Error::InsufficientData(_) => "insufficient-data",
            Error::DegenerateSpectrum(_) => "degenerate-spectrum",
            Error::GridUnstable { .. } => "grid-unstable",
            Error::StepCollapse { .. } => "step-collapse",
            Error::InvalidArgument(_) => "invalid-argument",
            Error::Io { .. } => "io-error",
            Error::Corrupt { .. } => "corrupt-data",
        }
    }
}
