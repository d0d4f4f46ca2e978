//! Command-line surface for the normalized KP solitary-wave solvers:
//! configuration, field serialization, structured result records and the
//! parameter-sweep driver.

pub mod commands;
pub mod config;
pub mod fieldfile;
pub mod records;

/// Process exit codes used by every subcommand.
pub mod exit {
    /// Success.
    pub const OK: i32 = 0;
    /// A check ran and failed (residuals above tolerance).
    pub const CHECK_FAILED: i32 = 1;
    /// Configuration or input errors; nothing was computed.
    pub const CONFIG: i32 = 2;
    /// The computation ran but did not converge; records were still written.
    pub const NOT_CONVERGED: i32 = 3;
}

/// One error type per driver: the exit code plus a message.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError {
            code: exit::CONFIG,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError {
            code: exit::CONFIG,
            message: format!("i/o error: {e}"),
        }
    }
}
