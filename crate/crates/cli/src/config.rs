//! Run configuration: plain-text `key=value` files overlaid by command-line
//! flags (flags win), fully validated before any compute. Unknown keys are
//! rejected. The effective configuration is echoed into every record.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use kpnw_core::{Grid, InitGuess, Nonlinearity, SolveOptions};

use crate::fieldfile;
use crate::CliError;

/// Initial-guess selector as configured.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "path", rename_all = "kebab-case")]
pub enum InitKind {
    GaussianDerivative,
    LumpLike,
    File(String),
}

/// Effective configuration of one invocation.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub grid: (usize, usize),
    pub box_lengths: (f64, f64),
    pub a: Option<f64>,
    pub q: Option<f64>,
    pub p: Option<f64>,
    pub mu: Option<f64>,
    pub seed: u64,
    pub estimate: bool,
    pub max_iters: usize,
    /// Pohozaev residual tolerance for convergence and checks.
    pub tol: f64,
    pub grad_tol: f64,
    pub step0: f64,
    pub out: PathBuf,
    pub workers: Option<usize>,
    pub init: InitKind,
    pub ball_radius: Option<f64>,
    pub start_fraction: f64,
    pub dealias: bool,
    /// User-supplied Gagliardo-Nirenberg constants.
    pub cq: Option<f64>,
    pub cp: Option<f64>,
    pub c_tenthirds: Option<f64>,
    /// Sweep ranges (comma-separated lists in the config).
    pub a_list: Vec<f64>,
    pub q_list: Vec<f64>,
    pub p_list: Vec<f64>,
    pub mu_list: Vec<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            grid: (128, 128),
            box_lengths: (40.0, 40.0),
            a: None,
            q: None,
            p: None,
            mu: None,
            seed: 0,
            estimate: false,
            max_iters: 2000,
            tol: 1e-6,
            grad_tol: 1e-8,
            step0: 1.0,
            out: PathBuf::from("."),
            workers: None,
            init: InitKind::GaussianDerivative,
            ball_radius: None,
            start_fraction: 0.25,
            dealias: false,
            cq: None,
            cp: None,
            c_tenthirds: None,
            a_list: Vec::new(),
            q_list: Vec::new(),
            p_list: Vec::new(),
            mu_list: Vec::new(),
        }
    }
}

/// Flags shared by every subcommand (see the interface contract); `None`
/// means "not given on the command line".
#[derive(Clone, Debug, Default, clap::Args)]
pub struct CommonFlags {
    /// Plain-text key=value configuration file.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory for field files and record streams.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Grid points, e.g. 128x128.
    #[arg(long, value_name = "NXxNY")]
    pub grid: Option<String>,
    /// Box lengths, e.g. 40x40.
    #[arg(long = "box", value_name = "LXxLY")]
    pub box_lengths: Option<String>,
    /// Prescribed mass |u|_2.
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Estimate missing Gagliardo-Nirenberg constants before solving.
    #[arg(long)]
    pub estimate: bool,
    #[arg(long = "max-iters")]
    pub max_iters: Option<usize>,
    /// Pohozaev residual tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Sweep worker count (falls back to KPNW_WORKERS, then 4).
    #[arg(long)]
    pub workers: Option<usize>,
}

fn parse_pair<T: std::str::FromStr>(s: &str, what: &str) -> Result<(T, T), CliError> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| CliError::config(format!("{what} must look like AxB, got '{s}'")))?;
    let pa = a
        .trim()
        .parse()
        .map_err(|_| CliError::config(format!("bad {what} component '{a}'")))?;
    let pb = b
        .trim()
        .parse()
        .map_err(|_| CliError::config(format!("bad {what} component '{b}'")))?;
    Ok((pa, pb))
}

fn parse_list(s: &str, key: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| CliError::config(format!("bad number '{t}' in {key}")))
        })
        .collect()
}

/// Parse a `key=value` file into a map; comments start with `#`.
fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::config(format!(
                "{}:{}: expected key=value, got '{line}'",
                path.display(),
                lineno + 1
            ))
        })?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

impl RunConfig {
    /// Build the effective configuration: defaults, then file, then flags.
    pub fn resolve(flags: &CommonFlags) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &flags.config {
            let map = parse_config_file(path)?;
            cfg.apply_file(&map)?;
        }
        cfg.apply_flags(flags)?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply_file(&mut self, map: &BTreeMap<String, String>) -> Result<(), CliError> {
        let parse_f64 = |k: &str, v: &str| -> Result<f64, CliError> {
            v.parse()
                .map_err(|_| CliError::config(format!("bad number '{v}' for key {k}")))
        };
        let parse_bool = |k: &str, v: &str| -> Result<bool, CliError> {
            match v {
                "true" | "1" | "yes" => Ok(true),
                "false" | "0" | "no" => Ok(false),
                _ => Err(CliError::config(format!("bad boolean '{v}' for key {k}"))),
            }
        };
        for (k, v) in map {
            match k.as_str() {
                "grid" => self.grid = parse_pair(v, "grid")?,
                "box" => self.box_lengths = parse_pair(v, "box")?,
                "a" => self.a = Some(parse_f64(k, v)?),
                "q" => self.q = Some(parse_f64(k, v)?),
                "p" => self.p = Some(parse_f64(k, v)?),
                "mu" => self.mu = Some(parse_f64(k, v)?),
                "seed" => {
                    self.seed = v
                        .parse()
                        .map_err(|_| CliError::config(format!("bad seed '{v}'")))?
                }
                "estimate" => self.estimate = parse_bool(k, v)?,
                "max_iters" => {
                    self.max_iters = v
                        .parse()
                        .map_err(|_| CliError::config(format!("bad max_iters '{v}'")))?
                }
                "tol" => self.tol = parse_f64(k, v)?,
                "grad_tol" => self.grad_tol = parse_f64(k, v)?,
                "step0" => self.step0 = parse_f64(k, v)?,
                "out" => self.out = PathBuf::from(v),
                "workers" => {
                    self.workers = Some(
                        v.parse()
                            .map_err(|_| CliError::config(format!("bad workers '{v}'")))?,
                    )
                }
                "init" => {
                    self.init = match v.as_str() {
                        "gaussian-derivative" => InitKind::GaussianDerivative,
                        "lump-like" => InitKind::LumpLike,
                        other => match other.strip_prefix("file:") {
                            Some(path) => InitKind::File(path.to_string()),
                            None => {
                                return Err(CliError::config(format!(
                                    "init must be gaussian-derivative, lump-like or file:PATH, got '{v}'"
                                )))
                            }
                        },
                    }
                }
                "ball_radius" => self.ball_radius = Some(parse_f64(k, v)?),
                "start_fraction" => self.start_fraction = parse_f64(k, v)?,
                "dealias" => self.dealias = parse_bool(k, v)?,
                "cq" => self.cq = Some(parse_f64(k, v)?),
                "cp" => self.cp = Some(parse_f64(k, v)?),
                "c_tenthirds" => self.c_tenthirds = Some(parse_f64(k, v)?),
                "a_list" => self.a_list = parse_list(v, k)?,
                "q_list" => self.q_list = parse_list(v, k)?,
                "p_list" => self.p_list = parse_list(v, k)?,
                "mu_list" => self.mu_list = parse_list(v, k)?,
                other => return Err(CliError::config(format!("unknown config key '{other}'"))),
            }
        }
        Ok(())
    }

    fn apply_flags(&mut self, flags: &CommonFlags) -> Result<(), CliError> {
        if let Some(s) = &flags.grid {
            self.grid = parse_pair(s, "grid")?;
        }
        if let Some(s) = &flags.box_lengths {
            self.box_lengths = parse_pair(s, "box")?;
        }
        if let Some(v) = flags.a {
            self.a = Some(v);
        }
        if let Some(v) = flags.q {
            self.q = Some(v);
        }
        if let Some(v) = flags.p {
            self.p = Some(v);
        }
        if let Some(v) = flags.mu {
            self.mu = Some(v);
        }
        if let Some(v) = flags.seed {
            self.seed = v;
        }
        if flags.estimate {
            self.estimate = true;
        }
        if let Some(v) = flags.max_iters {
            self.max_iters = v;
        }
        if let Some(v) = flags.tol {
            self.tol = v;
        }
        if let Some(v) = flags.workers {
            self.workers = Some(v);
        }
        if let Some(v) = &flags.out {
            self.out = v.clone();
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), CliError> {
        Grid::new(
            self.grid.0,
            self.grid.1,
            self.box_lengths.0,
            self.box_lengths.1,
        )
        .map_err(|e| CliError::config(e.to_string()))?;
        if !(self.tol > 0.0) || !(self.grad_tol > 0.0) || !(self.step0 > 0.0) {
            return Err(CliError::config("tolerances and step0 must be positive"));
        }
        if self.max_iters == 0 {
            return Err(CliError::config("max_iters must be at least 1"));
        }
        for (name, v) in [("a", self.a), ("mu", self.mu)] {
            if let Some(v) = v {
                if !(v > 0.0) || !v.is_finite() {
                    return Err(CliError::config(format!("{name} must be positive")));
                }
            }
        }
        Ok(())
    }

    pub fn grid_obj(&self) -> Result<Grid, CliError> {
        Grid::new(
            self.grid.0,
            self.grid.1,
            self.box_lengths.0,
            self.box_lengths.1,
        )
        .map_err(|e| CliError::config(e.to_string()))
    }

    /// The nonlinearity implied by `q`/`p`/`mu`: pure power unless both `p`
    /// and `mu` are given.
    pub fn nonlinearity(&self) -> Result<Nonlinearity, CliError> {
        let q = self
            .q
            .ok_or_else(|| CliError::config("missing exponent q (--q or config)"))?;
        match (self.p, self.mu) {
            (None, None) => Nonlinearity::pure_power(q).map_err(|e| CliError::config(e.to_string())),
            (Some(p), Some(mu)) => {
                Nonlinearity::combined(mu, q, p).map_err(|e| CliError::config(e.to_string()))
            }
            (Some(_), None) => Err(CliError::config("combined nonlinearity needs --mu as well")),
            (None, Some(_)) => Err(CliError::config("combined nonlinearity needs --p as well")),
        }
    }

    /// Solver options implied by the configuration; loads `init=file:` fields.
    pub fn solve_options(&self, grid: &Grid) -> Result<SolveOptions, CliError> {
        let init = match &self.init {
            InitKind::GaussianDerivative => InitGuess::GaussianDerivative,
            InitKind::LumpLike => InitGuess::LumpLike,
            InitKind::File(path) => {
                let f = fieldfile::read_field(Path::new(path))?;
                if f.grid() != grid {
                    return Err(CliError::config(format!(
                        "initial field {} does not match the requested grid",
                        path
                    )));
                }
                InitGuess::Field(f)
            }
        };
        Ok(SolveOptions {
            max_iters: self.max_iters,
            step0: self.step0,
            pohozaev_tol: self.tol,
            grad_tol: self.grad_tol,
            seed: self.seed,
            init,
            ball_radius: self.ball_radius,
            start_fraction: self.start_fraction,
            dealias: self.dealias,
        })
    }

    /// Number of sweep workers: flag/config, then KPNW_WORKERS, then 4.
    pub fn effective_workers(&self) -> usize {
        self.workers
            .or_else(|| {
                std::env::var("KPNW_WORKERS")
                    .ok()
                    .and_then(|v| v.parse().ok())
            })
            .unwrap_or(4)
            .max(1)
    }
}
