//! Library side of the `spinmap` command-line tool.
//!
//! Everything the binary does is routed through these modules so the
//! integration tests can drive a sweep in-process and inspect the results
//! without spawning a child. The binary in `main.rs` is a thin clap wrapper
//! over [`config`] + [`sweeps`].

pub mod config;
pub mod pipeline;
pub mod svg;
pub mod sweeps;

use std::fmt;

/// Errors surfaced by the CLI, split by exit code.
///
/// `Config` covers everything detectable before any real work starts: bad
/// flags, malformed config files, out-of-range values, missing input files.
/// It maps to exit code 1. `Runtime` covers failures mid-run (compute errors,
/// output I/O) and maps to exit code 2.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Runtime(String),
}

impl CliError {
    /// Process exit code for this error class.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Runtime(msg) => write!(f, "runtime error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<spinmap::Error> for CliError {
    fn from(e: spinmap::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

/// Shorthand used across the CLI modules.
pub type CliResult<T> = Result<T, CliError>;
