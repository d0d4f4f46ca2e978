//! `kpnw solve`: dispatch to the regime-appropriate solver, write the field
//! and one JSON-lines record.

use std::time::Instant;

use kpnw_core::optimize::{
    minimize_global, minimize_local_ball, minimize_pohozaev_manifold, nonexistence_probe,
    GnEstimate,
};
use kpnw_core::{thresholds, OptimizeError, Regime};

use crate::commands::{combined_constants, critical_constant, param_key};
use crate::config::RunConfig;
use crate::records::{
    append_line, artifact_version, ProbeSummary, Provenance, SolveRecord, SolveSummary,
    ThresholdsUsed,
};
use crate::{exit, fieldfile, CliError};

pub fn cmd_solve(cfg: &RunConfig) -> Result<i32, CliError> {
    let grid = cfg.grid_obj()?;
    let nl = cfg.nonlinearity()?;
    let a = cfg
        .a
        .ok_or_else(|| CliError::config("missing mass (--a or config)"))?;
    let opts = cfg.solve_options(&grid)?;
    let key = match nl {
        kpnw_core::Nonlinearity::PurePower { q } => param_key(a, q, None, None),
        kpnw_core::Nonlinearity::Combined { mu, q, p } => param_key(a, q, Some(p), Some(mu)),
    };
    std::fs::create_dir_all(&cfg.out)?;
    let record_path = cfg.out.join("solve.jsonl");
    let field_name = format!("field_{}.kpnw", key.replace('=', "").replace(',', "_"));
    let field_path = cfg.out.join(&field_name);
    let started = Instant::now();

    let mut record = SolveRecord {
        kind: "solve",
        key,
        field_file: None,
        result: None,
        probe: None,
        thresholds: None,
        error: None,
        wall_time_s: 0.0,
        provenance: Provenance {
            seed: cfg.seed,
            version: artifact_version(),
        },
        config: cfg,
    };

    let code = match nl.regime() {
        Regime::Subcritical | Regime::Supercritical => {
            let run = if nl.regime() == Regime::Subcritical {
                minimize_global(&grid, &nl, a, &opts)
            } else {
                minimize_pohozaev_manifold(&grid, &nl, a, &opts)
            };
            finish_solve(run, &mut record, &field_path, &field_name)?
        }
        Regime::Critical => {
            record.kind = "probe";
            let (c, _prov) = critical_constant(cfg, &grid, &opts)?;
            let est = GnEstimate {
                q: kpnw_core::functionals::Q_CRITICAL,
                c,
                observed_sup: c,
            };
            let a_star =
                thresholds::critical_mass(c).map_err(|e| CliError::config(e.to_string()))?;
            if a > a_star {
                return Err(CliError::config(format!(
                    "critical-exponent probe requires a <= a* = {a_star:.6}, got a = {a}"
                )));
            }
            match nonexistence_probe(&grid, a, &est, &opts) {
                Ok(report) => {
                    fieldfile::write_field(&field_path, &report.final_u)?;
                    record.field_file = Some(field_name.clone());
                    record.probe = Some(ProbeSummary::from(&report));
                    exit::OK
                }
                Err(OptimizeError::Precondition(msg)) => return Err(CliError::config(msg)),
                Err(e) => {
                    record.error = Some(e.to_string());
                    exit::NOT_CONVERGED
                }
            }
        }
        Regime::Combined => {
            let (q, p, mu) = match nl {
                kpnw_core::Nonlinearity::Combined { mu, q, p } => (q, p, mu),
                _ => unreachable!(),
            };
            let gn = combined_constants(cfg, &grid, q, p, &opts)?;
            let (_, a0) =
                thresholds::k_and_a0(&gn, mu).map_err(|e| CliError::config(e.to_string()))?;
            if a >= a0 {
                return Err(CliError::config(format!(
                    "combined-case local minimization requires a < a0 = {a0:.6}, got a = {a}"
                )));
            }
            let rho0 = match cfg.ball_radius {
                Some(r) => r,
                None => thresholds::rho_max(a0, &gn, mu)
                    .map_err(|e| CliError::config(e.to_string()))?,
            };
            record.thresholds = Some(ThresholdsUsed {
                cq: gn.cq,
                cp: gn.cp.unwrap_or(f64::NAN),
                a0,
                rho0,
                provenance: gn.provenance,
            });
            finish_solve(
                minimize_local_ball(&grid, &nl, a, rho0, &opts),
                &mut record,
                &field_path,
                &field_name,
            )?
        }
    };

    record.wall_time_s = started.elapsed().as_secs_f64();
    append_line(&record_path, &record)?;
    Ok(code)
}

/// Write the field file and fold a solver outcome into the record.
fn finish_solve(
    run: Result<kpnw_core::SolveResult, OptimizeError>,
    record: &mut SolveRecord<'_>,
    field_path: &std::path::Path,
    field_name: &str,
) -> Result<i32, CliError> {
    match run {
        Ok(result) => {
            fieldfile::write_field(field_path, &result.u)?;
            record.field_file = Some(field_name.to_string());
            let converged = result.converged;
            record.result = Some(SolveSummary::from(&result));
            Ok(if converged { exit::OK } else { exit::NOT_CONVERGED })
        }
        Err(OptimizeError::Precondition(msg)) => Err(CliError::config(msg)),
        Err(e) => {
            record.error = Some(e.to_string());
            Ok(exit::NOT_CONVERGED)
        }
    }
}
