//! `spinchaos` command-line front end.
//!
//! Exit codes: 0 on success, 1 when a statistical or validation check fails,
//! 2 on usage, configuration or numerical-domain errors.

mod commands;
mod config;
mod report;
mod validate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{ExperimentConfig, Overrides};

#[derive(Debug)]
pub enum CliError {
    /// Bad invocation or config; exit code 2.
    Usage(String),
    /// A check did not pass; exit code 1.
    Failed(String),
}

impl From<spinchaos::Error> for CliError {
    fn from(e: spinchaos::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("i/o error: {e}"))
    }
}

#[derive(Parser)]
#[command(name = "spinchaos", version, about = "Chaos expansions of level-set areas of spin-s fields on SO(3)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
struct Common {
    /// JSON experiment config; a small built-in profile is used without it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Rayon worker threads. Results do not depend on it.
    #[arg(long)]
    workers: Option<usize>,
    /// Grid resolution per axis.
    #[arg(long)]
    grid: Option<usize>,
    /// Chaos cap Q.
    #[arg(long)]
    order: Option<u32>,
    /// Number of realizations.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Write the κ, I, Θ and ν tables as CSV.
    Coeffs(Common),
    /// Monte Carlo estimate of the expected level-set area.
    Expectation(Common),
    /// Truncation residuals and component covariances.
    Chaos(Common),
    /// Identity and statistical self-checks.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Multiply κ(α, β) by a factor before checking, as `ALPHA,BETA,FACTOR`.
        #[arg(long, hide = true, value_parser = parse_tamper)]
        tamper_kappa: Option<(u32, u32, f64)>,
    },
    /// Sample one realization and export its level surface.
    Simulate(Common),
}

fn parse_tamper(s: &str) -> Result<(u32, u32, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err("expected ALPHA,BETA,FACTOR".into());
    }
    let a = parts[0].trim().parse().map_err(|e| format!("alpha: {e}"))?;
    let b = parts[1].trim().parse().map_err(|e| format!("beta: {e}"))?;
    let f = parts[2].trim().parse().map_err(|e| format!("factor: {e}"))?;
    Ok((a, b, f))
}

fn setup(common: &Common) -> Result<ExperimentConfig, CliError> {
    if let Some(w) = common.workers {
        if w == 0 {
            return Err(CliError::Usage("--workers must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }
    let overrides = Overrides {
        seed: common.seed,
        out: common.out.clone(),
        grid: common.grid,
        order: common.order,
        n: common.n,
    };
    ExperimentConfig::load(common.config.as_deref(), &overrides)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Coeffs(c) => commands::coeffs(&setup(&c)?),
        Command::Expectation(c) => commands::expectation(&setup(&c)?),
        Command::Chaos(c) => commands::chaos(&setup(&c)?),
        Command::Validate { common, tamper_kappa } => validate::run(&setup(&common)?, tamper_kappa),
        Command::Simulate(c) => commands::simulate(&setup(&c)?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failed(m)) => {
            eprintln!("FAILED: {m}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
