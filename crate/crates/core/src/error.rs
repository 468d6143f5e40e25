use num_complex::Complex64;
use std::path::PathBuf;

/// Errors produced anywhere in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("argument {z} outside the supported range: {reason}")]
    Range { z: Complex64, reason: &'static str },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("operation requires sigma > 0 (zero disorder is handled by the closed form)")]
    DegenerateDisorder,

    #[error(
        "Newton iteration did not converge after {iterations} iterations \
         (best iterate {best}, |residual| = {residual:e} eV)"
    )]
    NonConvergence {
        best: Complex64,
        residual: f64,
        iterations: usize,
    },

    #[error("need at least {needed} points, got {got}")]
    InsufficientPoints { needed: usize, got: usize },

    #[error("q = {q} outside tabulated range [{min}, {max}]")]
    OutOfRange { q: f64, min: f64, max: f64 },

    #[error("unknown preset {0:?} (expected one of: perovskite, bodipy-bsw)")]
    UnknownPreset(String),

    #[error("dispersion file {0} not found")]
    MissingDispersionFile(PathBuf),

    #[error("{source_name}:{line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "quadrature tolerance not met (estimated error {estimate:e}, requested {requested:e})"
    )]
    ToleranceNotMet { estimate: f64, requested: f64 },

    #[error("velocities must be positive (v_g = {v_g}, v_g0 = {v_g0})")]
    NonPositiveVelocity { v_g: f64, v_g0: f64 },

    #[error("dataset schema not recognised: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
