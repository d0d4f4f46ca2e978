//! `kpnw fiber`: fiber-map report of a stored field (psi samples plus the
//! regime's critical points) as JSON on stdout.

use std::path::Path;

use serde::Serialize;

use kpnw_core::{FiberError, FiberMap, Regime};

use crate::config::RunConfig;
use crate::{exit, fieldfile, CliError};

#[derive(Serialize)]
struct PsiSample {
    t: f64,
    psi: f64,
    psi_prime: f64,
}

#[derive(Serialize)]
struct FiberReportOut {
    regime: Regime,
    integrals: kpnw_core::FiberIntegrals,
    samples: Vec<PsiSample>,
    /// Unique fiber critical point of a pure power (minimum below the
    /// critical exponent, maximum above it).
    t_star: Option<f64>,
    psi_at_t_star: Option<f64>,
    /// Combined-case pair: local minimum then local maximum.
    t1: Option<f64>,
    t2: Option<f64>,
    psi_at_t1: Option<f64>,
    psi_at_t2: Option<f64>,
    status: String,
}

pub fn cmd_fiber(cfg: &RunConfig, field: &Path) -> Result<i32, CliError> {
    let u = fieldfile::read_field(field)?;
    let nl = cfg.nonlinearity()?;
    let fm = FiberMap::of(&u, &nl);
    if fm.integrals().mass_sq <= 0.0 || fm.integrals().seminorm_sq <= 0.0 {
        return Err(CliError::config("field is zero; the fiber is degenerate"));
    }

    let samples: Vec<PsiSample> = (0..=40)
        .map(|i| {
            let t = -10.0 + 0.5 * i as f64;
            PsiSample {
                t,
                psi: fm.psi(t),
                psi_prime: fm.psi_prime(t),
            }
        })
        .collect();

    let mut out = FiberReportOut {
        regime: nl.regime(),
        integrals: *fm.integrals(),
        samples,
        t_star: None,
        psi_at_t_star: None,
        t1: None,
        t2: None,
        psi_at_t1: None,
        psi_at_t2: None,
        status: "ok".into(),
    };

    match nl.regime() {
        Regime::Subcritical | Regime::Supercritical => match fm.critical_t_pure() {
            Ok(t) => {
                out.t_star = Some(t);
                out.psi_at_t_star = Some(fm.psi(t));
            }
            Err(e) => out.status = e.to_string(),
        },
        Regime::Critical => {
            out.status = "critical exponent: the fiber has no interior critical point".into();
        }
        Regime::Combined => match fm.critical_points_combined() {
            Ok((t1, t2)) => {
                out.t1 = Some(t1);
                out.t2 = Some(t2);
                out.psi_at_t1 = Some(fm.psi(t1));
                out.psi_at_t2 = Some(fm.psi(t2));
            }
            Err(e @ FiberError::NoSecondCriticalPoint)
            | Err(e @ FiberError::DegenerateDoubleRoot { .. }) => out.status = e.to_string(),
            Err(e) => return Err(CliError::config(e.to_string())),
        },
    }

    println!(
        "{}",
        serde_json::to_string(&out).map_err(|e| CliError::config(e.to_string()))?
    );
    Ok(exit::OK)
}
