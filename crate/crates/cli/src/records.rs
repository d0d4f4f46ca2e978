//! JSON-lines result records: one object per line, schema-stable and
//! append-only, so sweeps can stream and resume. Reruns with the same seed
//! and configuration reproduce every field except wall times.

use std::io::{BufRead, Write};
use std::path::Path;

use serde::Serialize;

use kpnw_core::{ProbeReport, Regime, SolveResult};

use crate::config::RunConfig;
use crate::CliError;

pub fn artifact_version() -> String {
    format!("kpnw-{}", env!("CARGO_PKG_VERSION"))
}

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub seed: u64,
    pub version: String,
}

/// Scalar view of a solve outcome (the field itself goes to a field file).
#[derive(Clone, Debug, Serialize)]
pub struct SolveSummary {
    pub lambda: f64,
    pub energy: f64,
    pub pohozaev_residual: f64,
    pub mass: f64,
    pub regime: Regime,
    pub iterations: usize,
    pub converged: bool,
    pub boundary_mass_fraction: f64,
    pub energy_trace: Vec<f64>,
}

impl From<&SolveResult> for SolveSummary {
    fn from(r: &SolveResult) -> Self {
        SolveSummary {
            lambda: r.lambda,
            energy: r.energy,
            pohozaev_residual: r.pohozaev_residual,
            mass: r.mass,
            regime: r.regime,
            iterations: r.iterations,
            converged: r.converged,
            boundary_mass_fraction: r.boundary_mass_fraction,
            energy_trace: r.energy_trace.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeSummary {
    pub a: f64,
    pub a_star: f64,
    pub initial_seminorm_sq: f64,
    pub final_seminorm_sq: f64,
    pub decay_ratio: f64,
    pub coercivity_ok: bool,
    pub min_coercivity_slack: f64,
    pub iterations: usize,
    pub final_energy: f64,
}

impl From<&ProbeReport> for ProbeSummary {
    fn from(r: &ProbeReport) -> Self {
        ProbeSummary {
            a: r.a,
            a_star: r.a_star,
            initial_seminorm_sq: r.initial_seminorm_sq,
            final_seminorm_sq: r.final_seminorm_sq,
            decay_ratio: r.decay_ratio,
            coercivity_ok: r.coercivity_ok,
            min_coercivity_slack: r.min_coercivity_slack,
            iterations: r.iterations,
            final_energy: r.final_energy,
        }
    }
}

/// Ball geometry actually used by a combined-case run.
#[derive(Clone, Debug, Serialize)]
pub struct ThresholdsUsed {
    pub cq: f64,
    pub cp: f64,
    pub a0: f64,
    pub rho0: f64,
    pub provenance: kpnw_core::Provenance,
}

/// One line of `solve.jsonl`.
#[derive(Debug, Serialize)]
pub struct SolveRecord<'a> {
    pub kind: &'static str,
    pub key: String,
    pub field_file: Option<String>,
    pub result: Option<SolveSummary>,
    pub probe: Option<ProbeSummary>,
    pub thresholds: Option<ThresholdsUsed>,
    pub error: Option<String>,
    pub wall_time_s: f64,
    pub provenance: Provenance,
    pub config: &'a RunConfig,
}

/// One line of `sweep.jsonl`; like a solve record but without the trace.
#[derive(Debug, Serialize)]
pub struct SweepRecord<'a> {
    pub key: String,
    pub params: SweepParams,
    pub outputs: Option<SweepOutputs>,
    pub error: Option<String>,
    pub wall_time_s: f64,
    pub provenance: Provenance,
    pub config: &'a RunConfig,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepParams {
    pub a: f64,
    pub q: f64,
    pub p: Option<f64>,
    pub mu: Option<f64>,
    pub grid: (usize, usize),
    pub box_lengths: (f64, f64),
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepOutputs {
    pub energy: f64,
    pub lambda: f64,
    pub pohozaev_residual: f64,
    pub regime: Regime,
    pub converged: bool,
    pub iterations: usize,
    pub boundary_mass_fraction: f64,
}

impl From<&SolveResult> for SweepOutputs {
    fn from(r: &SolveResult) -> Self {
        SweepOutputs {
            energy: r.energy,
            lambda: r.lambda,
            pohozaev_residual: r.pohozaev_residual,
            regime: r.regime,
            converged: r.converged,
            iterations: r.iterations,
            boundary_mass_fraction: r.boundary_mass_fraction,
        }
    }
}

/// Append one record as a compact JSON line.
pub fn append_line<T: Serialize>(path: &Path, record: &T) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let mut file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)?;
    let line = serde_json::to_string(record)
        .map_err(|e| CliError::config(format!("serialization failed: {e}")))?;
    writeln!(file, "{line}")?;
    Ok(())
}

/// Keys already present in a JSON-lines file (for sweep resume).
pub fn existing_keys(path: &Path) -> Result<Vec<String>, CliError> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let file = std::fs::File::open(path)?;
    let mut keys = Vec::new();
    for line in std::io::BufReader::new(file).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let v: serde_json::Value = serde_json::from_str(&line)
            .map_err(|e| CliError::config(format!("corrupt record in {}: {e}", path.display())))?;
        if let Some(k) = v.get("key").and_then(|k| k.as_str()) {
            keys.push(k.to_string());
        }
    }
    Ok(keys)
}
