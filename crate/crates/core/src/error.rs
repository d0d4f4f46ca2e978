//! Error types shared across the crate.

use thiserror::Error;

/// Errors from grid construction, field construction and spectral operators.
#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("grid dimensions must be even and >= 4, got {nx}x{ny}")]
    BadDimensions { nx: usize, ny: usize },
    #[error("box lengths must be positive, got {lx}x{ly}")]
    BadLengths { lx: f64, ly: f64 },
    #[error("field values must be finite")]
    NonFinite,
    #[error("value array has shape {got_rows}x{got_cols}, grid wants {ny}x{nx} (rows=y)")]
    ShapeMismatch {
        got_rows: usize,
        got_cols: usize,
        ny: usize,
        nx: usize,
    },
    #[error("field is not admissible: max row-mean {max_row_mean:.3e} exceeds tolerance")]
    NotAdmissible { max_row_mean: f64 },
    #[error("resample requires matching box lengths: {src_lx}x{src_ly} vs {dst_lx}x{dst_ly}")]
    BoxMismatch {
        src_lx: f64,
        src_ly: f64,
        dst_lx: f64,
        dst_ly: f64,
    },
    #[error("operation requires a nonzero field")]
    ZeroField,
    #[error("exponent out of range: {what}")]
    BadExponent { what: String },
}

/// Errors from the fiber-map analysis.
#[derive(Debug, Error)]
pub enum FiberError {
    #[error("fiber map is degenerate: {0}")]
    Degenerate(String),
    #[error("exponent too close to the L2-critical value 10/3 (t* = {t_star:.3e})")]
    NearCritical { t_star: f64 },
    #[error("psi' < 0 on the whole scan window; no second critical point")]
    NoSecondCriticalPoint,
    #[error("psi' touches zero without a sign change (degenerate double root near t = {t:.6})")]
    DegenerateDoubleRoot { t: f64 },
    #[error("operation requires {0}")]
    WrongRegime(String),
}

/// Errors from the closed-form threshold algebra.
#[derive(Debug, Error)]
pub enum ThresholdError {
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("missing Gagliardo-Nirenberg constant: {0}")]
    MissingConstant(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// Errors from the constrained solvers.
#[derive(Debug, Error)]
pub enum OptimizeError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("iterate left the ball: ||u||_0^2 = {seminorm_sq:.6e} >= rho0^2 = {rho0_sq:.6e} at iteration {iteration}")]
    BallExit {
        seminorm_sq: f64,
        rho0_sq: f64,
        iteration: usize,
    },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Fiber(#[from] FiberError),
    #[error(transparent)]
    Threshold(#[from] ThresholdError),
}
