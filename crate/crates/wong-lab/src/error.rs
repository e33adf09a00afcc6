//! Crate-wide error type.

use std::path::PathBuf;

/// Errors produced by grid construction, operator application and the
/// verification driver.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Grid dimension outside the supported range.
    #[error("grid dimension must be 1 or 2, got {0}")]
    InvalidDimension(usize),
    /// Per-axis resolution is not a power of two or is too small.
    #[error("grid resolution must be a power of two >= 8, got {0}")]
    InvalidResolution(usize),
    /// Non-positive period.
    #[error("grid period must be positive, got {0}")]
    InvalidPeriod(f64),
    /// Two fields (or a field and a mollifier) live on different grids.
    #[error("operands live on different grids")]
    GridMismatch,
    /// An operation received a field in the wrong representation.
    #[error("operation requires a {expected} field")]
    RepresentationMismatch { expected: &'static str },
    /// A spectral multiplier evaluated to NaN or infinity at a grid frequency.
    #[error("multiplier is not finite at frequency {xi:?}")]
    NonFiniteMultiplier { xi: Vec<f64> },
    /// Norm exponent outside [1, inf].
    #[error("norm exponent must satisfy 1 <= p <= inf, got {0}")]
    InvalidExponent(f64),
    /// An order / scale parameter violated its constraint.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// A compactly supported mollifier was requested with fewer than 8
    /// samples across its support.
    #[error("bump mollifier with R = {scale} is under-resolved on spacing h = {spacing} (need 1/R >= 4h)")]
    UnderResolvedMollifier { scale: f64, spacing: f64 },
    /// An operation that divides by a norm received the zero field.
    #[error("operation is undefined for the zero field")]
    ZeroField,
    /// Run-configuration syntax or constraint error.
    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },
    /// I/O failure, tagged with the offending path.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
