//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by operator construction, block decomposition, spectral
/// solves, and time evolution.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cutoff {cutoff} is invalid: need at least {min} Fock states")]
    InvalidCutoff { cutoff: usize, min: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("cutoff mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not Hermitian: max |M - M^dag| = {deviation:.3e} exceeds {tolerance:.3e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("trace deviates from 1 by {deviation:.3e} (tolerance {tolerance:.3e})")]
    TraceNotOne { deviation: f64, tolerance: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:.3e} below floor {floor:.3e}")]
    NotPositive { min_eigenvalue: f64, floor: f64 },

    #[error("truncated coherent state has norm {norm:.6} < 0.999 at cutoff {cutoff}; increase the cutoff")]
    InsufficientCutoff { norm: f64, cutoff: usize },

    #[error("full vectorization refused at cutoff {cutoff} (bound {max}): use the sector decomposition instead")]
    VectorizeBound { cutoff: usize, max: usize },

    #[error("generator leaks across symmetry sectors: max leakage {leakage:.3e} exceeds {tolerance:.3e}")]
    NotBlockDiagonal { leakage: f64, tolerance: f64 },

    #[error("operation requires a weakly symmetric model: {reason}")]
    SymmetryViolation { reason: String },

    #[error("steady-state null space has dimension {dimension} at the configured threshold")]
    DegenerateSteadyState { dimension: usize },

    #[error("steady-state null vector is traceless; cannot normalize to unit trace")]
    TracelessNullVector,

    #[error("expected sector k=0, got k={got}")]
    WrongSector { got: i64 },

    #[error("sector label out of range: {label} (cutoff {cutoff})")]
    SectorOutOfRange { label: i64, cutoff: usize },

    #[error("eigensolve failed or did not meet the residual bound: {detail}")]
    EigenFailure { detail: String },

    #[error("numerical check failed: {detail}")]
    Numerical { detail: String },

    #[error("integration step size underflow at t = {time:.6e} (h = {step:.3e}); the generator is too stiff for the requested tolerance or cutoff")]
    Stiffness { time: f64, step: f64 },

    #[error("population {population:.3e} in the top Fock levels at t = {time:.6e} exceeds 1e-6; the cutoff is too small for this trajectory")]
    CutoffTooSmall { population: f64, time: f64 },

    #[error("state integrity violated at t = {time:.6e}: {check} = {value:.3e} exceeds {bound:.3e}")]
    Integrity {
        check: &'static str,
        time: f64,
        value: f64,
        bound: f64,
    },

    #[error("invalid model configuration: {reason}")]
    InvalidConfig { reason: String },

    #[error("cutoff schedule exhausted at C = {last_cutoff} (bound {max_cutoff}) without convergence to {tolerance:.3e}")]
    CutoffNotConverged {
        last_cutoff: usize,
        max_cutoff: usize,
        tolerance: f64,
    },

    #[error("grid is invalid: {reason}")]
    InvalidGrid { reason: String },

    #[error(transparent)]
    Linalg(#[from] ndarray_linalg::error::LinalgError),
}

pub type Result<T> = std::result::Result<T, Error>;
