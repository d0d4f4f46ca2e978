//! `kpnw thresholds`: closed-form threshold quantities as JSON on stdout.

use kpnw_core::ThresholdReport;

use crate::commands::{combined_constants, critical_constant};
use crate::config::RunConfig;
use crate::{exit, CliError};

pub fn cmd_thresholds(cfg: &RunConfig) -> Result<i32, CliError> {
    let grid = cfg.grid_obj()?;
    let opts = cfg.solve_options(&grid)?;
    let report = match (cfg.p, cfg.mu) {
        (Some(p), Some(mu)) => {
            let q = cfg
                .q
                .ok_or_else(|| CliError::config("missing exponent q"))?;
            let gn = combined_constants(cfg, &grid, q, p, &opts)?;
            let a = cfg
                .a
                .ok_or_else(|| CliError::config("combined thresholds need the mass --a"))?;
            ThresholdReport::combined(a, &gn, mu).map_err(|e| CliError::config(e.to_string()))?
        }
        (None, None) => {
            // Pure power: only the critical exponent carries a threshold.
            if let Some(q) = cfg.q {
                if (q - kpnw_core::functionals::Q_CRITICAL).abs() > 1e-9 {
                    return Err(CliError::config(
                        "pure-power thresholds exist only at the critical exponent q = 10/3",
                    ));
                }
            }
            let (c, provenance) = critical_constant(cfg, &grid, &opts)?;
            ThresholdReport::critical(c, provenance)
                .map_err(|e| CliError::config(e.to_string()))?
        }
        _ => {
            return Err(CliError::config(
                "give both --p and --mu for combined thresholds, or neither",
            ))
        }
    };
    println!(
        "{}",
        serde_json::to_string(&report).map_err(|e| CliError::config(e.to_string()))?
    );
    Ok(exit::OK)
}
