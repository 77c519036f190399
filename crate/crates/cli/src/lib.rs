//! Command-line front end: argument parsing, input files, and deterministic
//! JSON reports over `netsym-core`.

mod args;
mod commands;
mod input;
mod json;

use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;
use sha2::{Digest, Sha256};

pub use args::Cli;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const DEFAULT_SEED: u64 = 0x5eed;
pub const SEED_ENV: &str = "NETSYM_SEED";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("bad arguments: {0}")]
    Usage(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed input {path}: {message}")]
    Malformed { path: String, message: String },
    #[error("cap exceeded: {0}")]
    Cap(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error(transparent)]
    Core(#[from] netsym_core::Error),
    #[error("cannot write report to {path}: {message}")]
    Write { path: String, message: String },
}

/// How a completed command ended; flagged outcomes exit with code 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Completed,
    Violated,
    NotPreparable,
    NetworkInfeasible,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Completed => "completed",
            Status::Violated => "violated",
            Status::NotPreparable => "not_preparable",
            Status::NetworkInfeasible => "network_infeasible",
        }
    }

    pub fn exit_code(self) -> i32 {
        if self == Status::Completed {
            0
        } else {
            2
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub inputs_digest: String,
    pub results: serde_json::Value,
    pub status: &'static str,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Execution {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Execution {
    fn failure(message: String) -> Self {
        Self { code: 1, stdout: String::new(), stderr: message }
    }
}

fn effective_seed(flag: Option<u64>, env: Option<&str>) -> Result<u64, CliError> {
    match env {
        Some(text) => text.trim().parse().map_err(|_| CliError::Usage(format!("{SEED_ENV}={text:?} is not an unsigned integer"))),
        None => Ok(flag.unwrap_or(DEFAULT_SEED)),
    }
}

/// Parse `argv` (without the program name), run the command and render the
/// report. `env_seed` is the value of `NETSYM_SEED`, if set.
pub fn run(argv: &[String], env_seed: Option<&str>) -> Execution {
    let full = std::iter::once("netsym".to_string()).chain(argv.iter().cloned());
    let cli = match Cli::try_parse_from(full) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Execution { code: 0, stdout: e.to_string(), stderr: String::new() },
                _ => Execution::failure(e.render().to_string()),
            }
        }
    };
    match execute(argv, cli, env_seed) {
        Ok((report, status)) => {
            let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
            text.push('\n');
            Execution { code: status.exit_code(), stdout: text, stderr: String::new() }
        }
        Err(e) => Execution::failure(format!("netsym: error: {e}\n")),
    }
}

fn execute(argv: &[String], cli: Cli, env_seed: Option<&str>) -> Result<(Report, Status), CliError> {
    let started = Instant::now();
    let seed = effective_seed(cli.common.seed, env_seed)?;
    let mut hasher = Sha256::new();
    for a in argv {
        hasher.update(a.as_bytes());
        hasher.update([0x1f]);
    }
    hasher.update(seed.to_le_bytes());
    let mut ctx = commands::Context::new(&cli.common, seed, hasher);
    let (results, status) = commands::dispatch(&cli.command, &mut ctx)?;
    let report = Report {
        command: argv.to_vec(),
        inputs_digest: format!("{:x}", ctx.finish()),
        results,
        status: status.name(),
        version: VERSION,
        timing_ms: cli.common.timing.then(|| started.elapsed().as_secs_f64() * 1e3),
    };
    if let Some(path) = &cli.common.json {
        let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
        text.push('\n');
        std::fs::write(path, text).map_err(|e| CliError::Write { path: path.display().to_string(), message: e.to_string() })?;
    }
    Ok((report, status))
}
