//! `kpnw sweep`: the parameter-sweep driver. A fixed-size worker pool runs
//! independent solves; a single writer emits records in parameter-key order,
//! so an interrupted sweep leaves a clean prefix and a resumed one produces
//! the same file as an uninterrupted run (wall times aside).

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::sync::{mpsc, Mutex};
use std::time::Instant;

use kpnw_core::optimize::{minimize_global, minimize_local_ball, minimize_pohozaev_manifold};
use kpnw_core::{thresholds, Grid, Nonlinearity, Regime};

use crate::commands::{combined_constants, param_key};
use crate::config::RunConfig;
use crate::records::{append_line, artifact_version, Provenance, SweepOutputs, SweepParams, SweepRecord};
use crate::{exit, CliError};

pub fn cmd_sweep(cfg: &RunConfig) -> Result<i32, CliError> {
    let grid = cfg.grid_obj()?;
    std::fs::create_dir_all(&cfg.out)?;
    let out_path = cfg.out.join("sweep.jsonl");

    let params = build_params(cfg)?;
    if params.is_empty() {
        // Empty range: an empty output stream, successfully.
        std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&out_path)?;
        return Ok(exit::OK);
    }

    // Combined keys share ball geometry per (q, p, mu); resolve it up front so
    // workers stay deterministic and estimation runs once.
    let mut ball: BTreeMap<String, (f64, f64)> = BTreeMap::new();
    for p in &params {
        if let (Some(pp), Some(mu)) = (p.p, p.mu) {
            let tag = format!("q={},p={},mu={}", p.q, pp, mu);
            if !ball.contains_key(&tag) {
                let opts = cfg.solve_options(&grid)?;
                let gn = combined_constants(cfg, &grid, p.q, pp, &opts)?;
                let (_, a0) =
                    thresholds::k_and_a0(&gn, mu).map_err(|e| CliError::config(e.to_string()))?;
                let rho0 = match cfg.ball_radius {
                    Some(r) => r,
                    None => thresholds::rho_max(a0, &gn, mu)
                        .map_err(|e| CliError::config(e.to_string()))?,
                };
                ball.insert(tag, (a0, rho0));
            }
        }
    }

    let existing: HashSet<String> = crate::records::existing_keys(&out_path)?.into_iter().collect();
    let pending: Vec<(usize, SweepParams)> = params
        .into_iter()
        .filter(|p| !existing.contains(&key_of(p)))
        .enumerate()
        .collect();
    if pending.is_empty() {
        return Ok(exit::OK);
    }

    let workers = cfg.effective_workers().min(pending.len());
    let queue: Mutex<VecDeque<(usize, SweepParams)>> = Mutex::new(pending.into_iter().collect());
    let (tx, rx) = mpsc::channel::<(usize, SweepParams, Option<SweepOutputs>, Option<String>, f64)>();

    std::thread::scope(|scope| -> Result<(), CliError> {
        for _ in 0..workers {
            let tx = tx.clone();
            let queue = &queue;
            let grid = grid.clone();
            let ball = &ball;
            scope.spawn(move || loop {
                let item = queue.lock().expect("queue poisoned").pop_front();
                let Some((idx, p)) = item else { break };
                let started = Instant::now();
                let (outputs, error) = solve_one(cfg, &grid, &p, ball);
                let _ = tx.send((idx, p, outputs, error, started.elapsed().as_secs_f64()));
            });
        }
        drop(tx);

        // Single writer, emitting strictly in key order.
        let mut next = 0usize;
        let mut buffer: BTreeMap<usize, (SweepParams, Option<SweepOutputs>, Option<String>, f64)> =
            BTreeMap::new();
        for (idx, p, outputs, error, wall) in rx {
            buffer.insert(idx, (p, outputs, error, wall));
            while let Some((p, outputs, error, wall)) = buffer.remove(&next) {
                let record = SweepRecord {
                    key: key_of(&p),
                    params: p,
                    outputs,
                    error,
                    wall_time_s: wall,
                    provenance: Provenance {
                        seed: cfg.seed,
                        version: artifact_version(),
                    },
                    config: cfg,
                };
                append_line(&out_path, &record)?;
                next += 1;
            }
        }
        Ok(())
    })?;

    Ok(exit::OK)
}

fn key_of(p: &SweepParams) -> String {
    param_key(p.a, p.q, p.p, p.mu)
}

/// Cross product of the sweep ranges, sorted by parameter key.
fn build_params(cfg: &RunConfig) -> Result<Vec<SweepParams>, CliError> {
    let a_list = if cfg.a_list.is_empty() {
        cfg.a.into_iter().collect()
    } else {
        cfg.a_list.clone()
    };
    let q_list = if cfg.q_list.is_empty() {
        cfg.q.into_iter().collect()
    } else {
        cfg.q_list.clone()
    };
    let p_list = if cfg.p_list.is_empty() {
        cfg.p.into_iter().collect::<Vec<_>>()
    } else {
        cfg.p_list.clone()
    };
    let mu_list = if cfg.mu_list.is_empty() {
        cfg.mu.into_iter().collect::<Vec<_>>()
    } else {
        cfg.mu_list.clone()
    };
    if p_list.is_empty() != mu_list.is_empty() {
        return Err(CliError::config(
            "combined sweeps need both p and mu ranges (or neither)",
        ));
    }

    let mut out = Vec::new();
    for &a in &a_list {
        for &q in &q_list {
            if p_list.is_empty() {
                out.push(SweepParams {
                    a,
                    q,
                    p: None,
                    mu: None,
                    grid: cfg.grid,
                    box_lengths: cfg.box_lengths,
                });
            } else {
                for &p in &p_list {
                    for &mu in &mu_list {
                        out.push(SweepParams {
                            a,
                            q,
                            p: Some(p),
                            mu: Some(mu),
                            grid: cfg.grid,
                            box_lengths: cfg.box_lengths,
                        });
                    }
                }
            }
        }
    }
    out.sort_by(|x, y| {
        (x.a, x.q, x.p.unwrap_or(0.0), x.mu.unwrap_or(0.0))
            .partial_cmp(&(y.a, y.q, y.p.unwrap_or(0.0), y.mu.unwrap_or(0.0)))
            .expect("finite parameters")
    });
    out.dedup_by(|x, y| key_of(x) == key_of(y));
    Ok(out)
}

/// One sweep cell: dispatch by regime, mapping every failure to a record
/// error so the sweep continues.
fn solve_one(
    cfg: &RunConfig,
    grid: &Grid,
    p: &SweepParams,
    ball: &BTreeMap<String, (f64, f64)>,
) -> (Option<SweepOutputs>, Option<String>) {
    let nl = match (p.p, p.mu) {
        (Some(pp), Some(mu)) => Nonlinearity::combined(mu, p.q, pp),
        _ => Nonlinearity::pure_power(p.q),
    };
    let nl = match nl {
        Ok(nl) => nl,
        Err(e) => return (None, Some(e.to_string())),
    };
    let opts = match cfg.solve_options(grid) {
        Ok(o) => o,
        Err(e) => return (None, Some(e.message)),
    };
    let run = match nl.regime() {
        Regime::Subcritical => minimize_global(grid, &nl, p.a, &opts),
        Regime::Supercritical => minimize_pohozaev_manifold(grid, &nl, p.a, &opts),
        Regime::Critical => {
            return (
                None,
                Some("critical exponent: run the nonexistence probe via `solve`".into()),
            )
        }
        Regime::Combined => {
            let tag = format!(
                "q={},p={},mu={}",
                p.q,
                p.p.expect("combined"),
                p.mu.expect("combined")
            );
            let (a0, rho0) = ball[&tag];
            if p.a >= a0 {
                return (
                    None,
                    Some(format!("a = {} is not below the ball threshold a0 = {a0:.6}", p.a)),
                );
            }
            minimize_local_ball(grid, &nl, p.a, rho0, &opts)
        }
    };
    match run {
        Ok(result) => (Some(SweepOutputs::from(&result)), None),
        Err(e) => (None, Some(e.to_string())),
    }
}
