//! Subcommand implementations.

mod check;
mod fiber;
mod gn;
mod solve;
mod sweep;
mod thresholds;

pub use check::cmd_check;
pub use fiber::cmd_fiber;
pub use gn::cmd_gn_estimate;
pub use solve::cmd_solve;
pub use sweep::cmd_sweep;
pub use thresholds::cmd_thresholds;

use kpnw_core::optimize::estimate_gn_constant;
use kpnw_core::{GnConstants, Grid, Provenance, SolveOptions};

use crate::config::RunConfig;
use crate::CliError;

/// Deterministic parameter key for records and file names.
pub(crate) fn param_key(a: f64, q: f64, p: Option<f64>, mu: Option<f64>) -> String {
    let mut key = format!("a={a},q={q}");
    if let (Some(p), Some(mu)) = (p, mu) {
        key.push_str(&format!(",p={p},mu={mu}"));
    }
    key
}

/// Working constants for a combined run: user-supplied `cq`/`cp`, or
/// estimates when `--estimate` is set.
pub(crate) fn combined_constants(
    cfg: &RunConfig,
    grid: &Grid,
    q: f64,
    p: f64,
    opts: &SolveOptions,
) -> Result<GnConstants, CliError> {
    match (cfg.cq, cfg.cp) {
        (Some(cq), Some(cp)) => GnConstants::pair(q, cq, p, cp, Provenance::UserSupplied)
            .map_err(|e| CliError::config(e.to_string())),
        _ if cfg.estimate => {
            let eq = estimate_gn_constant(grid, q, opts)
                .map_err(|e| CliError::config(e.to_string()))?;
            let ep = estimate_gn_constant(grid, p, opts)
                .map_err(|e| CliError::config(e.to_string()))?;
            GnConstants::pair(q, eq.c, p, ep.c, Provenance::Estimated)
                .map_err(|e| CliError::config(e.to_string()))
        }
        _ => Err(CliError::config(
            "combined thresholds need cq and cp (config) or --estimate",
        )),
    }
}

/// The critical-exponent constant: user-supplied or estimated.
pub(crate) fn critical_constant(
    cfg: &RunConfig,
    grid: &Grid,
    opts: &SolveOptions,
) -> Result<(f64, Provenance), CliError> {
    if let Some(c) = cfg.c_tenthirds {
        if !(c > 0.0) {
            return Err(CliError::config("c_tenthirds must be positive"));
        }
        return Ok((c, Provenance::UserSupplied));
    }
    if cfg.estimate {
        let est = estimate_gn_constant(grid, kpnw_core::functionals::Q_CRITICAL, opts)
            .map_err(|e| CliError::config(e.to_string()))?;
        return Ok((est.c, Provenance::Estimated));
    }
    Err(CliError::config(
        "the critical constant needs c_tenthirds (config) or --estimate",
    ))
}
