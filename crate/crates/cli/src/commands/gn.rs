//! `kpnw gn-estimate`: run the Gagliardo-Nirenberg constant estimator and
//! print the working constants as JSON.

use serde::Serialize;

use kpnw_core::optimize::estimate_gn_constant;

use crate::config::RunConfig;
use crate::{exit, CliError};

#[derive(Serialize)]
struct EstimateOut {
    q: f64,
    cq: f64,
    observed_sup_q: f64,
    p: Option<f64>,
    cp: Option<f64>,
    observed_sup_p: Option<f64>,
    provenance: kpnw_core::Provenance,
    grid: (usize, usize),
    box_lengths: (f64, f64),
    seed: u64,
}

pub fn cmd_gn_estimate(cfg: &RunConfig) -> Result<i32, CliError> {
    let grid = cfg.grid_obj()?;
    let opts = cfg.solve_options(&grid)?;
    let q = cfg
        .q
        .ok_or_else(|| CliError::config("missing exponent q (--q or config)"))?;
    let eq = estimate_gn_constant(&grid, q, &opts).map_err(|e| CliError::config(e.to_string()))?;
    let mut out = EstimateOut {
        q,
        cq: eq.c,
        observed_sup_q: eq.observed_sup,
        p: None,
        cp: None,
        observed_sup_p: None,
        provenance: kpnw_core::Provenance::Estimated,
        grid: cfg.grid,
        box_lengths: cfg.box_lengths,
        seed: cfg.seed,
    };
    if let Some(p) = cfg.p {
        let ep =
            estimate_gn_constant(&grid, p, &opts).map_err(|e| CliError::config(e.to_string()))?;
        out.p = Some(p);
        out.cp = Some(ep.c);
        out.observed_sup_p = Some(ep.observed_sup);
    }
    println!(
        "{}",
        serde_json::to_string(&out).map_err(|e| CliError::config(e.to_string()))?
    );
    Ok(exit::OK)
}
