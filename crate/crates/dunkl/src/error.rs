//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DunklError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("root system validation failed: {0}")]
    InvalidRootSystem(String),
    #[error("generator set did not close into a finite group within {max_order} elements")]
    NotAFiniteGroup { max_order: usize },
    #[error("kernel evaluation unsupported for group kind {0}")]
    UnsupportedGroup(String),
    #[error("domain tag mismatch: expected {expected}, got {got}")]
    DomainTag { expected: String, got: String },
    #[error("grid resolution too coarse: {0}")]
    Resolution(String),
    #[error("grid domain too small: {0}")]
    DomainTooSmall(String),
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("kernel series cap exceeded: |z| = {z:.3} needs more than {cap} terms; rescale grids")]
    SeriesCap { z: f64, cap: usize },
    #[error("test function failed the decay certificate and is inadmissible for weak pairings")]
    InadmissibleTestFunction,
    #[error("spectrum normalization mismatch: produced with c_k = {produced}, consumed with c_k = {consumed}")]
    SpectrumMismatch { produced: f64, consumed: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, DunklError>;
