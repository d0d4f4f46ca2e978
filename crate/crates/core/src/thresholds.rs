//! Closed-form constant algebra: the Gagliardo-Nirenberg exponent `beta`, the
//! critical mass at `q = 10/3`, and the combined-nonlinearity ball geometry
//! `h(a, rho)`, `g_a`, `rho_a`, `K`, `a0` with its trichotomy.
//!
//! Exponent combinations that suffer cancellation near `q -> 10/3` (such as
//! `q beta - 2`) are computed from their algebraically simplified forms, e.g.
//! `q beta - 2 = (3q - 10)/2`, rather than by composing `beta`.
//!
//! Note on the closed form of `max g_a`: substituting `rho_a` into `h` gives
//! the mass exponent `4/3` for both terms (both reduce to
//! `(q beta_q - 2)/3 + (1 - beta_q) q = 4/3`), so
//! `max g_a = 1/2 - K a^{4/3}` and the trichotomy boundary sits at
//! `a0 = (2K)^{-3/4}`.

use serde::Serialize;

use crate::error::ThresholdError;
use crate::functionals::Q_CRITICAL;

/// Origin of a Gagliardo-Nirenberg constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Estimated,
    UserSupplied,
}

/// Working Gagliardo-Nirenberg constants for one or two exponents.
///
/// `cq` dominates the supremum of the quotient observed during estimation (or
/// is supplied by the user); thresholds derived from it inherit `provenance`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct GnConstants {
    pub q: f64,
    pub cq: f64,
    pub p: Option<f64>,
    pub cp: Option<f64>,
    pub provenance: Provenance,
}

impl GnConstants {
    pub fn single(q: f64, cq: f64, provenance: Provenance) -> Result<Self, ThresholdError> {
        if !(cq > 0.0) {
            return Err(ThresholdError::Domain(format!("C_q must be > 0, got {cq}")));
        }
        beta(q)?;
        Ok(GnConstants {
            q,
            cq,
            p: None,
            cp: None,
            provenance,
        })
    }

    pub fn pair(
        q: f64,
        cq: f64,
        p: f64,
        cp: f64,
        provenance: Provenance,
    ) -> Result<Self, ThresholdError> {
        let mut gn = Self::single(q, cq, provenance)?;
        if !(cp > 0.0) {
            return Err(ThresholdError::Domain(format!("C_p must be > 0, got {cp}")));
        }
        beta(p)?;
        if !(q < Q_CRITICAL && p > Q_CRITICAL && p < 6.0 && q > 2.0) {
            return Err(ThresholdError::Domain(format!(
                "combined exponents need 2 < q < 10/3 < p < 6, got q = {q}, p = {p}"
            )));
        }
        gn.p = Some(p);
        gn.cp = Some(cp);
        Ok(gn)
    }

    fn combined(&self) -> Result<(f64, f64, f64, f64), ThresholdError> {
        match (self.p, self.cp) {
            (Some(p), Some(cp)) => Ok((self.q, self.cq, p, cp)),
            _ => Err(ThresholdError::MissingConstant(
                "combined thresholds need both C_q and C_p".into(),
            )),
        }
    }
}

/// `beta(q) = 3/2 - 3/q` for `q` in `[2, 6]`.
pub fn beta(q: f64) -> Result<f64, ThresholdError> {
    if !(2.0..=6.0).contains(&q) {
        return Err(ThresholdError::Domain(format!(
            "beta requires q in [2, 6], got {q}"
        )));
    }
    Ok(beta_unchecked(q))
}

/// `beta` without the domain check; used internally on validated exponents.
pub fn beta_unchecked(q: f64) -> f64 {
    1.5 - 3.0 / q
}

/// `q beta(q) - 2 = (3q - 10)/2`, cancellation-free.
pub fn q_beta_minus_2(q: f64) -> f64 {
    1.5 * q - 5.0
}

/// `(1 - beta(q)) q = 3 - q/2`, cancellation-free.
pub fn one_minus_beta_times_q(q: f64) -> f64 {
    3.0 - 0.5 * q
}

/// Critical mass for nonexistence at `q = 10/3`:
/// `a* = (3 C_{10/3} / 5)^{-3/4}`.
pub fn critical_mass(c_tenthirds: f64) -> Result<f64, ThresholdError> {
    if !(c_tenthirds > 0.0) {
        return Err(ThresholdError::Domain(format!(
            "critical_mass requires C > 0, got {c_tenthirds}"
        )));
    }
    Ok((0.6 * c_tenthirds).powf(-0.75))
}

/// `h(a, rho) = 1/2 - (mu/q) C_q rho^{q beta_q - 2} a^{(1-beta_q) q}
///            - (1/p) C_p rho^{p beta_p - 2} a^{(1-beta_p) p}`.
///
/// For fixed `a` this is the one-variable map `g_a(rho)`.
pub fn h(a: f64, rho: f64, gn: &GnConstants, mu: f64) -> Result<f64, ThresholdError> {
    let (q, cq, p, cp) = gn.combined()?;
    if !(a > 0.0 && rho > 0.0 && mu > 0.0) {
        return Err(ThresholdError::Domain(format!(
            "h requires a, rho, mu > 0, got a = {a}, rho = {rho}, mu = {mu}"
        )));
    }
    Ok(0.5
        - mu / q * cq * rho.powf(q_beta_minus_2(q)) * a.powf(one_minus_beta_times_q(q))
        - cp / p * rho.powf(q_beta_minus_2(p)) * a.powf(one_minus_beta_times_q(p)))
}

/// The positive bracket shared by `rho_a` and `K`:
/// `-((q beta_q - 2)/(p beta_p - 2)) (p mu / q) (C_q / C_p)`.
fn bracket(q: f64, cq: f64, p: f64, cp: f64, mu: f64) -> f64 {
    -(q_beta_minus_2(q) / q_beta_minus_2(p)) * (p * mu / q) * (cq / cp)
}

/// The unique maximum point of `g_a`:
/// `rho_a = bracket^{1/(p beta_p - q beta_q)} a^{1/3}` (the mass exponent
/// `((1-beta_q)q - (1-beta_p)p)/(p beta_p - q beta_q)` simplifies to `1/3`).
pub fn rho_max(a: f64, gn: &GnConstants, mu: f64) -> Result<f64, ThresholdError> {
    let (q, cq, p, cp) = gn.combined()?;
    if !(a > 0.0 && mu > 0.0) {
        return Err(ThresholdError::Domain(format!(
            "rho_max requires a, mu > 0, got a = {a}, mu = {mu}"
        )));
    }
    let gap = 1.5 * (p - q); // p beta_p - q beta_q
    Ok(bracket(q, cq, p, cp, mu).powf(1.0 / gap) * a.cbrt())
}

/// The constant `K` of the trichotomy and the boundary mass `a0` solving
/// `max_rho g_{a0}(rho) = 0`, i.e. `a0 = (2K)^{-3/4}`.
pub fn k_and_a0(gn: &GnConstants, mu: f64) -> Result<(f64, f64), ThresholdError> {
    let (q, cq, p, cp) = gn.combined()?;
    if !(mu > 0.0) {
        return Err(ThresholdError::Domain(format!("mu must be > 0, got {mu}")));
    }
    let gap = 1.5 * (p - q);
    let r = bracket(q, cq, p, cp, mu);
    let k = mu / q * cq * r.powf(q_beta_minus_2(q) / gap)
        + cp / p * r.powf(q_beta_minus_2(p) / gap);
    let a0 = (2.0 * k).powf(-0.75);
    Ok((k, a0))
}

/// Closed form of `max_rho g_a(rho) = 1/2 - K a^{4/3}`.
pub fn gmax(a: f64, gn: &GnConstants, mu: f64) -> Result<f64, ThresholdError> {
    let (k, _) = k_and_a0(gn, mu)?;
    Ok(0.5 - k * a.powf(4.0 / 3.0))
}

/// Sign of `max_rho g_a`, the existence trichotomy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trichotomy {
    Positive,
    Zero,
    Negative,
}

pub fn trichotomy(a: f64, gn: &GnConstants, mu: f64) -> Result<Trichotomy, ThresholdError> {
    let g = gmax(a, gn, mu)?;
    Ok(classify(g))
}

fn classify(g: f64) -> Trichotomy {
    if g.abs() <= 1e-10 {
        Trichotomy::Zero
    } else if g > 0.0 {
        Trichotomy::Positive
    } else {
        Trichotomy::Negative
    }
}

/// Monotonicity window check: given `h(a1, rho1) >= 0` and `0 < a2 <= a1`,
/// verify `h(a2, .) >= -1e-12` on a 1000-point grid over
/// `[(a2/a1) rho1, rho1]`.
pub fn monotone_window_check(
    a1: f64,
    rho1: f64,
    a2: f64,
    gn: &GnConstants,
    mu: f64,
) -> Result<bool, ThresholdError> {
    let h1 = h(a1, rho1, gn, mu)?;
    if h1 < 0.0 {
        return Err(ThresholdError::Precondition(format!(
            "h(a1, rho1) = {h1:.6e} < 0"
        )));
    }
    if !(a2 > 0.0 && a2 <= a1) {
        return Err(ThresholdError::Precondition(format!(
            "need 0 < a2 <= a1, got a1 = {a1}, a2 = {a2}"
        )));
    }
    let lo = a2 / a1 * rho1;
    for i in 0..1000 {
        let rho = lo + (rho1 - lo) * i as f64 / 999.0;
        if h(a2, rho, gn, mu)? < -1e-12 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Threshold quantities surfaced by the CLI; fields are `None` when they do
/// not apply to the requested regime.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ThresholdReport {
    pub a_star: Option<f64>,
    pub rho_a: Option<f64>,
    pub k_const: Option<f64>,
    pub a0: Option<f64>,
    pub gmax: Option<f64>,
    pub trichotomy: Option<Trichotomy>,
    pub provenance: Provenance,
}

impl ThresholdReport {
    /// Report for the L2-critical pure power: just the critical mass.
    pub fn critical(c_tenthirds: f64, provenance: Provenance) -> Result<Self, ThresholdError> {
        Ok(ThresholdReport {
            a_star: Some(critical_mass(c_tenthirds)?),
            rho_a: None,
            k_const: None,
            a0: None,
            gmax: None,
            trichotomy: None,
            provenance,
        })
    }

    /// Report for the combined nonlinearity at mass `a`.
    pub fn combined(a: f64, gn: &GnConstants, mu: f64) -> Result<Self, ThresholdError> {
        let (k, a0) = k_and_a0(gn, mu)?;
        let g = gmax(a, gn, mu)?;
        Ok(ThresholdReport {
            a_star: None,
            rho_a: Some(rho_max(a, gn, mu)?),
            k_const: Some(k),
            a0: Some(a0),
            gmax: Some(g),
            trichotomy: Some(classify(g)),
            provenance: gn.provenance,
        })
    }
}
