//! `kpnw` — pseudospectral solvers and diagnostics for normalized solitary
//! waves of the generalized KP equation on a periodic box.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use kpnw_cli::commands;
use kpnw_cli::config::{CommonFlags, RunConfig};

#[derive(Parser)]
#[command(
    name = "kpnw",
    version,
    about = "Normalized solitary waves of the generalized KP equation (2D, periodic box)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the regime-appropriate constrained minimization at mass --a.
    Solve {
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Closed-form variational thresholds (critical mass, ball geometry).
    Thresholds {
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Fiber-map report (psi samples, critical points) of a stored field.
    Fiber {
        #[command(flatten)]
        flags: CommonFlags,
        /// Field file to analyze.
        field: PathBuf,
    },
    /// Parameter sweep over a_list/q_list/p_list/mu_list, JSON-lines output.
    Sweep {
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Recompute and gate the diagnostics of a stored field.
    Check {
        #[command(flatten)]
        flags: CommonFlags,
        /// Field file to check.
        field: PathBuf,
    },
    /// Estimate Gagliardo-Nirenberg constants for --q (and --p).
    GnEstimate {
        #[command(flatten)]
        flags: CommonFlags,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let run = || -> Result<i32, kpnw_cli::CliError> {
        match &cli.command {
            Command::Solve { flags } => commands::cmd_solve(&RunConfig::resolve(flags)?),
            Command::Thresholds { flags } => commands::cmd_thresholds(&RunConfig::resolve(flags)?),
            Command::Fiber { flags, field } => {
                commands::cmd_fiber(&RunConfig::resolve(flags)?, field)
            }
            Command::Sweep { flags } => commands::cmd_sweep(&RunConfig::resolve(flags)?),
            Command::Check { flags, field } => {
                commands::cmd_check(&RunConfig::resolve(flags)?, field)
            }
            Command::GnEstimate { flags } => {
                commands::cmd_gn_estimate(&RunConfig::resolve(flags)?)
            }
        }
    };
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("kpnw: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
