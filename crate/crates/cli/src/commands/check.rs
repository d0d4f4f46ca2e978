//! `kpnw check`: recompute the variational diagnostics of a stored field and
//! gate on the configured tolerances. Exit 0 when every residual passes,
//! 1 when any fails, 2 for unreadable or inadmissible input.

use std::path::Path;

use serde::Serialize;

use kpnw_core::functionals::{
    fiber_integrals, lagrange_multiplier_from_integrals, pohozaev_residual, weak_form_residual,
};
use kpnw_core::spectral::boundary_mass_fraction;
use kpnw_core::Regime;

use crate::config::RunConfig;
use crate::{exit, fieldfile, CliError};

#[derive(Serialize)]
struct CheckReport {
    regime: Regime,
    mass: f64,
    energy: f64,
    lambda: f64,
    pohozaev_residual: f64,
    weak_form_residual: f64,
    boundary_mass_fraction: f64,
    admissibility_defect: f64,
    tolerance: f64,
    pass: bool,
}

pub fn cmd_check(cfg: &RunConfig, field: &Path) -> Result<i32, CliError> {
    let u = fieldfile::read_field(field)?;
    let nl = cfg.nonlinearity()?;
    let fi = fiber_integrals(&u, &nl);
    if fi.mass_sq <= 0.0 {
        return Err(CliError::config("field is zero; nothing to check"));
    }
    let lambda =
        lagrange_multiplier_from_integrals(&fi, &nl).map_err(|e| CliError::config(e.to_string()))?;
    let p_res = pohozaev_residual(&fi, &nl);
    let weak = weak_form_residual(&u, &nl, lambda);
    let pass = p_res <= cfg.tol && weak <= cfg.tol;

    let report = CheckReport {
        regime: nl.regime(),
        mass: fi.mass_sq.sqrt(),
        energy: kpnw_core::functionals::energy_from_integrals(&fi, &nl),
        lambda,
        pohozaev_residual: p_res,
        weak_form_residual: weak,
        boundary_mass_fraction: boundary_mass_fraction(&u),
        admissibility_defect: u.max_row_mean(),
        tolerance: cfg.tol,
        pass,
    };
    println!(
        "{}",
        serde_json::to_string(&report).map_err(|e| CliError::config(e.to_string()))?
    );
    Ok(if pass { exit::OK } else { exit::CHECK_FAILED })
}
