use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by the spectral laboratory.
#[derive(Debug, Error)]
pub enum LabError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("shape mismatch: expected {expected} values, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("multiplier is not finite at xi = ({}, {}, {})", .xi[0], .xi[1], .xi[2])]
    NonFiniteMultiplier { xi: [f64; 3] },

    #[error("unsupported L^p exponent {0} (only 1, 2 and infinity are computable)")]
    UnsupportedExponent(f64),

    #[error("dyadic index {j} outside partition range [{min}, {max}]")]
    ShellOutOfRange { j: i32, min: i32, max: i32 },

    #[error("field is not divergence-free: max |xi . u| = {residual:e} exceeds {bound:e}")]
    DivergenceViolation { residual: f64, bound: f64 },

    #[error("CFL violation: dt * |u|_inf / dx = {ratio:.4} exceeds cfl_max = {cfl_max}")]
    Cfl { ratio: f64, cfl_max: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite state at t = {time}")]
    NonFinite { time: f64 },

    #[error("Picard iteration did not converge after {iterations} iterations (last increment {last_increment:e}); try a shorter horizon")]
    PicardDiverged { iterations: usize, last_increment: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("snapshot format error: {0}")]
    Snapshot(String),

    #[error("line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("csv parse error at row {row}: {message}")]
    Csv { row: usize, message: String },

    #[error("{0}: no samples")]
    NoSamples(String),

    #[error("{0}")]
    Refused(String),
}

pub type Result<T> = std::result::Result<T, LabError>;

impl LabError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LabError::Io {
            path: path.into(),
            source,
        }
    }
}
