//! Command-line front end: configuration, CSV and SVG artifacts, and the
//! `simulate`, `envelope`, `denoise`, `study` and `selftest` commands.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod oracle;
pub mod svg;

use clap::{Parser, Subcommand};

pub use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "domcftp", version, about = "Perfect simulation of area-interaction processes and wavelet shrinkage")]
pub struct Cli {
    /// Worker threads; defaults to $DOMCFTP_WORKERS or all cores.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact draws from a multiscale area-interaction model.
    Simulate(commands::simulate::SimulateArgs),
    /// L and T function envelopes for a data pattern.
    Envelope(commands::envelope::EnvelopeArgs),
    /// Denoise a signal with the exact posterior-median estimator.
    Denoise(commands::denoise::DenoiseArgs),
    /// Replicated simulation study on the standard test signals.
    Study(commands::study::StudyArgs),
    /// Quick oracle checks of the samplers.
    Selftest(commands::selftest::SelftestArgs),
}

pub const WORKERS_ENV: &str = "DOMCFTP_WORKERS";

/// Resolves the worker count: flag, then environment, then all cores.
pub fn worker_count(flag: Option<usize>) -> CliResult<Option<usize>> {
    if let Some(n) = flag {
        return Ok(Some(n));
    }
    match std::env::var(WORKERS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| CliError::Input(format!("{WORKERS_ENV}={v:?} is not a worker count"))),
        Err(_) => Ok(None),
    }
}

pub fn run(cli: &Cli) -> CliResult<()> {
    if let Some(n) = worker_count(cli.workers)? {
        if n == 0 {
            return Err(CliError::Input("worker count must be at least 1".into()));
        }
        // Only fails when a pool already exists, e.g. on a second call in
        // the same process; the existing pool is then kept.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match &cli.command {
        Command::Simulate(a) => commands::simulate::run(a),
        Command::Envelope(a) => commands::envelope::run(a),
        Command::Denoise(a) => commands::denoise::run(a),
        Command::Study(a) => commands::study::run(a),
        Command::Selftest(a) => commands::selftest::run(a),
    }
}
