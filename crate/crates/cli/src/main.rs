//! `qwalk`: run search, scaling, tracking and circuit experiments from JSON
//! configs and write CSV/JSON results.
//!
//! Exit codes: 0 success, 1 invalid input, 2 runtime failure. Diagnostics go
//! to stderr; stdout lists the files written. `QWALK_WORKERS` caps the number
//! of worker threads.

mod commands;
mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "qwalk", version, about = "Labeled quantum-walk search experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Io {
    /// JSON experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Marked-node probabilities over time and the optimal step.
    Search(Io),
    /// Success probability against lattice size, with an a/ln(bN) fit.
    Scale(Io),
    /// Epoch-by-epoch reconstruction of a moving particle.
    Track(Io),
    /// Gate-level search circuit as OpenQASM 2.0 with resource counts.
    Circuit(Io),
}

#[derive(Debug)]
pub enum Failure {
    Invalid(String),
    Runtime(String),
}

impl Failure {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Self::Invalid(msg.into())
    }

    pub fn runtime(msg: impl Into<String>) -> Self {
        Self::Runtime(msg.into())
    }
}

fn init_workers() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("QWALK_WORKERS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::invalid(format!("QWALK_WORKERS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::runtime(e.to_string()))
}

fn prepare(out: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(out).map_err(|e| Failure::runtime(format!("cannot create {}: {e}", out.display())))
}

fn run(cli: Cli) -> Result<(), Failure> {
    init_workers()?;
    match cli.command {
        Command::Search(io) => {
            let cfg: config::SearchConfig = config::load(&io.config)?;
            cfg.resolve()?;
            prepare(&io.out)?;
            commands::search(&cfg, &io.out)
        }
        Command::Scale(io) => {
            let cfg: config::ScaleConfig = config::load(&io.config)?;
            cfg.validate()?;
            prepare(&io.out)?;
            commands::scale(&cfg, &io.out)
        }
        Command::Track(io) => {
            let cfg: config::TrackConfig = config::load(&io.config)?;
            cfg.resolve(&io.config)?;
            prepare(&io.out)?;
            commands::track_cmd(&cfg, &io.config, &io.out)
        }
        Command::Circuit(io) => {
            let cfg: config::CircuitConfig = config::load(&io.config)?;
            cfg.resolve()?;
            prepare(&io.out)?;
            commands::circuit_cmd(&cfg, &io.out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Usage errors are input errors; help and version are not errors.
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
