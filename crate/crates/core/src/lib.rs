//! Pseudospectral constrained optimization for normalized solitary waves of
//! the generalized Kadomtsev-Petviashvili equation in 2D.
//!
//! The stationary problem is posed on the anisotropic energy space built from
//! `|u_x|^2 + |D_x^{-1} u_y|^2`, truncated to a large periodic box. The crate
//! provides:
//!
//! * [`spectral`] — grids, fields, FFT-based nonlocal operators and the
//!   X-metric preconditioner,
//! * [`functionals`] — energies, Pohozaev functionals, Lagrange multiplier,
//!   Gagliardo-Nirenberg quotient and gradients,
//! * [`fiber`] — the anisotropic scaling `e^t u(e^{2t/3}x, e^{4t/3}y)` and its
//!   closed-form fiber maps,
//! * [`thresholds`] — closed-form constant algebra (critical mass, the
//!   combined-nonlinearity ball geometry),
//! * [`optimize`] — the constrained solvers, the Gagliardo-Nirenberg constant
//!   estimator, the critical-mass nonexistence probe and the mountain-pass
//!   upper-bound surrogate.

pub mod error;
pub mod fiber;
pub mod functionals;
pub mod optimize;
pub mod spectral;
pub mod thresholds;

pub use ndarray;

pub use error::{FiberError, OptimizeError, SpectralError, ThresholdError};
pub use fiber::FiberMap;
pub use functionals::{FiberIntegrals, Nonlinearity, Regime, SolveResult};
pub use optimize::{GnEstimate, InitGuess, ProbeReport, SolveOptions};
pub use spectral::{Field, Grid, SpectralCoeffs};
pub use thresholds::{GnConstants, Provenance, ThresholdReport, Trichotomy};
