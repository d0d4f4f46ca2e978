//! The variational core: energy, Pohozaev functional, Lagrange multiplier,
//! Gagliardo-Nirenberg quotient, the L2 gradient, and the fiber-integral
//! extraction that every closed-form fiber map is built from.

use serde::Serialize;

use crate::error::SpectralError;
use crate::spectral::Field;

/// The L2-critical exponent `10/3`, where `q beta(q) = 2`.
pub const Q_CRITICAL: f64 = 10.0 / 3.0;

/// Nonlinearity of the stationary equation: a pure power `|t|^{q-2} t` or the
/// combined form `mu |t|^{q-2} t + |t|^{p-2} t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Nonlinearity {
    PurePower { q: f64 },
    Combined { mu: f64, q: f64, p: f64 },
}

/// Mass-criticality regime of a [`Nonlinearity`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Subcritical,
    Critical,
    Supercritical,
    Combined,
}

impl Nonlinearity {
    /// Pure power with `q` in `(2, 6)`.
    pub fn pure_power(q: f64) -> Result<Self, SpectralError> {
        if !(q > 2.0 && q < 6.0) {
            return Err(SpectralError::BadExponent {
                what: format!("pure power requires 2 < q < 6, got q = {q}"),
            });
        }
        Ok(Nonlinearity::PurePower { q })
    }

    /// Combined powers with `2 < q < 10/3 < p < 6` and `mu > 0`.
    pub fn combined(mu: f64, q: f64, p: f64) -> Result<Self, SpectralError> {
        if !(q > 2.0 && q < Q_CRITICAL && p > Q_CRITICAL && p < 6.0) {
            return Err(SpectralError::BadExponent {
                what: format!("combined requires 2 < q < 10/3 < p < 6, got q = {q}, p = {p}"),
            });
        }
        if !(mu > 0.0) {
            return Err(SpectralError::BadExponent {
                what: format!("combined requires mu > 0, got mu = {mu}"),
            });
        }
        Ok(Nonlinearity::Combined { mu, q, p })
    }

    pub fn regime(&self) -> Regime {
        match *self {
            Nonlinearity::PurePower { q } => {
                if q < Q_CRITICAL {
                    Regime::Subcritical
                } else if q > Q_CRITICAL {
                    Regime::Supercritical
                } else {
                    Regime::Critical
                }
            }
            Nonlinearity::Combined { .. } => Regime::Combined,
        }
    }

    pub fn q(&self) -> f64 {
        match *self {
            Nonlinearity::PurePower { q } | Nonlinearity::Combined { q, .. } => q,
        }
    }

    /// Pointwise `f(t)`: `|t|^{q-2} t` plus the `p` term in the combined case.
    pub fn f(&self, t: f64) -> f64 {
        match *self {
            Nonlinearity::PurePower { q } => powsign(t, q - 1.0),
            Nonlinearity::Combined { mu, q, p } => {
                mu * powsign(t, q - 1.0) + powsign(t, p - 1.0)
            }
        }
    }
}

/// `sign(t) |t|^e`, the odd power.
fn powsign(t: f64, e: f64) -> f64 {
    t.signum() * t.abs().powf(e)
}

/// The scalar quadruple `(|u|_2^2, ||u||_0^2, |u|_q^q, |u|_p^p)` from which
/// every fiber map is a closed form. `lp = 0` for pure powers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FiberIntegrals {
    /// `|u|_2^2`
    pub mass_sq: f64,
    /// `||u||_0^2 = int |u_x|^2 + |D_x^{-1} u_y|^2`
    pub seminorm_sq: f64,
    /// `|u|_q^q`
    pub lq: f64,
    /// `|u|_p^p` (zero for pure powers)
    pub lp: f64,
}

/// Extract the fiber integrals of `u` under `nl`.
pub fn fiber_integrals(u: &Field, nl: &Nonlinearity) -> FiberIntegrals {
    let mass_sq = u.lp_norm_p(2.0);
    let seminorm_sq = u.x_seminorm_sq();
    match *nl {
        Nonlinearity::PurePower { q } => FiberIntegrals {
            mass_sq,
            seminorm_sq,
            lq: u.lp_norm_p(q),
            lp: 0.0,
        },
        Nonlinearity::Combined { q, p, .. } => FiberIntegrals {
            mass_sq,
            seminorm_sq,
            lq: u.lp_norm_p(q),
            lp: u.lp_norm_p(p),
        },
    }
}

/// Energy from precomputed fiber integrals:
/// `1/2 ||u||_0^2 - (mu_eff/q) |u|_q^q - (1/p) |u|_p^p`.
pub fn energy_from_integrals(fi: &FiberIntegrals, nl: &Nonlinearity) -> f64 {
    match *nl {
        Nonlinearity::PurePower { q } => 0.5 * fi.seminorm_sq - fi.lq / q,
        Nonlinearity::Combined { mu, q, p } => {
            0.5 * fi.seminorm_sq - mu / q * fi.lq - fi.lp / p
        }
    }
}

/// The constrained energy functional `J` (or `J_mu` in the combined case).
pub fn energy(u: &Field, nl: &Nonlinearity) -> f64 {
    energy_from_integrals(&fiber_integrals(u, nl), nl)
}

/// Pohozaev functional from precomputed integrals,
/// `2/3 ||u||_0^2 - mu_eff (q-2)/q |u|_q^q - (p-2)/p |u|_p^p`,
/// i.e. the fiber-map derivative at `t = 0`.
pub fn pohozaev_from_integrals(fi: &FiberIntegrals, nl: &Nonlinearity) -> f64 {
    let kin = 2.0 / 3.0 * fi.seminorm_sq;
    match *nl {
        Nonlinearity::PurePower { q } => kin - (q - 2.0) / q * fi.lq,
        Nonlinearity::Combined { mu, q, p } => {
            kin - mu * (q - 2.0) / q * fi.lq - (p - 2.0) / p * fi.lp
        }
    }
}

/// Pohozaev functional `P(u)`; vanishes on constrained critical points.
pub fn pohozaev(u: &Field, nl: &Nonlinearity) -> f64 {
    pohozaev_from_integrals(&fiber_integrals(u, nl), nl)
}

/// Scale-free Pohozaev residual, `|P(u)| / max(||u||_0^2, |u|_q^q, |u|_p^p)`.
pub fn pohozaev_residual(fi: &FiberIntegrals, nl: &Nonlinearity) -> f64 {
    let scale = fi.seminorm_sq.max(fi.lq).max(fi.lp);
    if scale == 0.0 {
        0.0
    } else {
        pohozaev_from_integrals(fi, nl).abs() / scale
    }
}

/// Lagrange multiplier from the weak form,
/// `lambda = (||u||_0^2 - int f(u) u) / |u|_2^2`.
pub fn lagrange_multiplier_from_integrals(
    fi: &FiberIntegrals,
    nl: &Nonlinearity,
) -> Result<f64, SpectralError> {
    if fi.mass_sq <= 0.0 {
        return Err(SpectralError::ZeroField);
    }
    let nonlinear = match *nl {
        Nonlinearity::PurePower { .. } => fi.lq,
        Nonlinearity::Combined { mu, .. } => mu * fi.lq + fi.lp,
    };
    Ok((fi.seminorm_sq - nonlinear) / fi.mass_sq)
}

/// Lagrange multiplier of a nontrivial admissible field.
pub fn lagrange_multiplier(u: &Field, nl: &Nonlinearity) -> Result<f64, SpectralError> {
    lagrange_multiplier_from_integrals(&fiber_integrals(u, nl), nl)
}

/// Residual of the weak-form identity `||u||_0^2 - lambda |u|_2^2 - int f(u) u`,
/// relative to `||u||_0^2`.
pub fn weak_form_residual(u: &Field, nl: &Nonlinearity, lambda: f64) -> f64 {
    let fi = fiber_integrals(u, nl);
    let nonlinear = match *nl {
        Nonlinearity::PurePower { .. } => fi.lq,
        Nonlinearity::Combined { mu, .. } => mu * fi.lq + fi.lp,
    };
    let r = fi.seminorm_sq - lambda * fi.mass_sq - nonlinear;
    if fi.seminorm_sq == 0.0 {
        r.abs()
    } else {
        r.abs() / fi.seminorm_sq
    }
}

/// Gagliardo-Nirenberg quotient
/// `W(u) = |u|_q^q / (|u|_2^{(1-beta) q} ||u||_0^{q beta})` with
/// `beta = 3/2 - 3/q`. Any valid constant `C_q` dominates `sup W`.
pub fn gn_quotient(u: &Field, q: f64) -> Result<f64, SpectralError> {
    if !(2.0..=6.0).contains(&q) {
        return Err(SpectralError::BadExponent {
            what: format!("gn_quotient requires q in [2, 6], got {q}"),
        });
    }
    let mass_sq = u.lp_norm_p(2.0);
    if mass_sq <= 0.0 {
        return Err(SpectralError::ZeroField);
    }
    let beta = crate::thresholds::beta_unchecked(q);
    let seminorm_sq = u.x_seminorm_sq();
    let lq = u.lp_norm_p(q);
    // |u|_2^{(1-beta)q} = mass_sq^{(1-beta)q/2}; ||u||_0^{q beta} = A^{q beta/2}.
    Ok(lq / (mass_sq.powf(0.5 * (1.0 - beta) * q) * seminorm_sq.powf(0.5 * q * beta)))
}

/// L2-pairing gradient of the energy: `(-d_xx + D_x^{-2} d_yy) u - f(u)`,
/// projected admissible.
pub fn l2_gradient(u: &Field, nl: &Nonlinearity) -> Field {
    l2_gradient_opts(u, nl, false)
}

/// As [`l2_gradient`], optionally applying the 2/3-rule truncation to the
/// nonlinear term before projecting.
pub fn l2_gradient_opts(u: &Field, nl: &Nonlinearity, dealias: bool) -> Field {
    let linear = u.apply_x_symbol();
    let nonlinear = u.map(|v| nl.f(v));
    let nonlinear = if dealias {
        nonlinear.dealias_two_thirds()
    } else {
        nonlinear
    };
    linear.sub(&nonlinear).project_admissible()
}

/// `int f(u) u`, the nonlinear pairing used by the weak form.
pub fn nonlinear_pairing(fi: &FiberIntegrals, nl: &Nonlinearity) -> f64 {
    match *nl {
        Nonlinearity::PurePower { .. } => fi.lq,
        Nonlinearity::Combined { mu, .. } => mu * fi.lq + fi.lp,
    }
}

/// Converged solver output: the field plus its variational diagnostics.
#[derive(Clone, Debug, Serialize)]
pub struct SolveResult {
    #[serde(skip)]
    pub u: Field,
    pub lambda: f64,
    pub energy: f64,
    /// Relative Pohozaev residual, `|P(u)| / max(||u||_0^2, |u|_q^q, |u|_p^p)`.
    pub pohozaev_residual: f64,
    /// Achieved L2 norm `|u|_2`.
    pub mass: f64,
    pub regime: Regime,
    pub iterations: usize,
    pub converged: bool,
    pub boundary_mass_fraction: f64,
    /// Energy value after every accepted step (the monotone trace).
    pub energy_trace: Vec<f64>,
}
