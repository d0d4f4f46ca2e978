//! Constrained solvers on the mass sphere: the global subcritical
//! minimization, the combined-case local minimization in the seminorm ball,
//! the Pohozaev-manifold reduced minimization, the Gagliardo-Nirenberg
//! constant estimator, the critical-mass nonexistence probe and the
//! mountain-pass upper-bound surrogate.
//!
//! All solvers share one descent scheme: Sobolev-preconditioned projected
//! gradient descent with exact mass retraction and Armijo backtracking, which
//! guarantees the monotone energy traces the diagnostics rely on. A solver
//! instance owns its state; distinct instances may run concurrently.

mod flow;
mod gn;
mod probe;
mod seeds;
mod solvers;

pub use gn::{estimate_gn_constant, GnEstimate};
pub use probe::{nonexistence_probe, ProbeReport};
pub use solvers::{
    minimize_global, minimize_local_ball, minimize_pohozaev_manifold, mountain_pass_upper_bound,
};

use crate::spectral::Field;

/// Initial iterate for a solver run.
#[derive(Clone, Debug, Default)]
pub enum InitGuess {
    /// `d/dx exp(-sigma r^2)` sized to the box (the default).
    #[default]
    GaussianDerivative,
    /// Rational lump-shaped profile.
    LumpLike,
    /// A caller-supplied field (rescaled to the requested mass).
    Field(Field),
}

/// Knobs shared by every solver.
#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub max_iters: usize,
    /// Initial Armijo step.
    pub step0: f64,
    /// Relative Pohozaev residual a converged result must satisfy.
    pub pohozaev_tol: f64,
    /// Descent stationarity tolerance, relative to the constraint mass.
    pub grad_tol: f64,
    pub seed: u64,
    pub init: InitGuess,
    /// Optional override for the ball radius `rho_0` (combined-case runs);
    /// plumbing for drivers, the solver takes the radius explicitly.
    pub ball_radius: Option<f64>,
    /// Ball-constrained runs start with `||u_0||_0 <= start_fraction * rho_0`.
    pub start_fraction: f64,
    /// Apply the 2/3-rule truncation to the nonlinear gradient term.
    pub dealias: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_iters: 2000,
            step0: 1.0,
            pohozaev_tol: 1e-6,
            grad_tol: 1e-8,
            seed: 0,
            init: InitGuess::GaussianDerivative,
            ball_radius: None,
            start_fraction: 0.25,
            dealias: false,
        }
    }
}
