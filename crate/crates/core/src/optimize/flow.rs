//! Shared pieces of the projected descent flows.

use crate::error::OptimizeError;
use crate::fiber::{apply_scaling, FiberMap};
use crate::functionals::{
    energy_from_integrals, fiber_integrals, l2_gradient_opts, lagrange_multiplier_from_integrals,
    pohozaev_residual, Nonlinearity, SolveResult,
};
use crate::optimize::{InitGuess, SolveOptions};
use crate::spectral::{boundary_mass_fraction, Field, Grid};

pub(crate) const ARMIJO_C: f64 = 1e-4;
pub(crate) const STEP_MAX: f64 = 1e3;

/// Exact retraction onto the mass sphere `|u|_2 = a`.
pub(crate) fn retract_mass(u: &Field, a: f64) -> Result<Field, OptimizeError> {
    let m = u.lp_norm_p(2.0).sqrt();
    if m == 0.0 {
        return Err(OptimizeError::Precondition(
            "cannot retract the zero field onto the mass sphere".into(),
        ));
    }
    Ok(u.scale(a / m))
}

/// Remove the L2 component along `u` (the sphere normal).
pub(crate) fn tangent_project(d: &Field, u: &Field) -> Field {
    let uu = u.l2_inner(u);
    if uu == 0.0 {
        return d.clone();
    }
    let c = d.l2_inner(u) / uu;
    d.add_scaled(-c, u)
}

/// Tangent L2 gradient plus the preconditioned tangent descent direction.
///
/// Projecting before preconditioning keeps the Armijo slope
/// `<g_tan, dir> = -<g_tan, M g_tan>` strictly negative away from
/// stationarity (`M` is positive definite on the admissible subspace).
pub(crate) fn descent_direction(u: &Field, nl: &Nonlinearity, dealias: bool) -> (Field, Field) {
    let grad = l2_gradient_opts(u, nl, dealias);
    let gtan = tangent_project(&grad, u);
    let dir = tangent_project(&gtan.x_metric_precondition(), u).scale(-1.0);
    (gtan, dir)
}

/// Materialize the iterate's own fiber critical point (the minimum for pure
/// subcritical powers, the first critical point in the combined case) and
/// re-retract the mass. `None` when the fiber solve is unavailable, the shift
/// is negligible, or it would not move the iterate.
pub(crate) fn fiber_polish(u: &Field, nl: &Nonlinearity, a: f64) -> Option<Field> {
    let fm = FiberMap::of(u, nl);
    let t = match nl {
        Nonlinearity::PurePower { .. } => fm.critical_t_pure().ok()?,
        Nonlinearity::Combined { .. } => fm.critical_points_combined().ok()?.0,
    };
    if !(1e-14..=2.0).contains(&t.abs()) {
        return None;
    }
    retract_mass(&apply_scaling(u, t), a).ok()
}

/// Resolved initial iterate: either a member of a scannable seed family or a
/// caller-supplied field.
pub(crate) enum PreparedInit {
    Family(crate::optimize::seeds::SeedFamily),
    Free(Field),
}

/// Validate the mass and resolve the init option.
pub(crate) fn prepare_init(
    grid: &Grid,
    a: f64,
    opts: &SolveOptions,
) -> Result<PreparedInit, OptimizeError> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(OptimizeError::Precondition(format!(
            "mass must be positive and finite, got a = {a}"
        )));
    }
    Ok(match &opts.init {
        InitGuess::GaussianDerivative => {
            PreparedInit::Family(crate::optimize::seeds::SeedFamily::GaussDeriv)
        }
        InitGuess::LumpLike => PreparedInit::Family(crate::optimize::seeds::SeedFamily::Lump),
        InitGuess::Field(f) => {
            if f.grid() != grid {
                return Err(OptimizeError::Precondition(
                    "initial field lives on a different grid".into(),
                ));
            }
            PreparedInit::Free(f.project_admissible())
        }
    })
}

/// Number of log-spaced scan points per seed-family axis.
pub(crate) const SEED_SCAN_STEPS: usize = 12;

/// Assemble the diagnostics of a final iterate.
pub(crate) fn finalize(
    u: Field,
    nl: &Nonlinearity,
    iterations: usize,
    stationary: bool,
    energy_trace: Vec<f64>,
    opts: &SolveOptions,
) -> SolveResult {
    let fi = fiber_integrals(&u, nl);
    let p_res = pohozaev_residual(&fi, nl);
    let lambda = lagrange_multiplier_from_integrals(&fi, nl).unwrap_or(f64::NAN);
    SolveResult {
        lambda,
        energy: energy_from_integrals(&fi, nl),
        pohozaev_residual: p_res,
        mass: fi.mass_sq.sqrt(),
        regime: nl.regime(),
        iterations,
        converged: stationary && p_res <= opts.pohozaev_tol,
        boundary_mass_fraction: boundary_mass_fraction(&u),
        energy_trace,
        u,
    }
}
