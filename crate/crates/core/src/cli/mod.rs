//! `logergo` command line: argument parsing, run manifests and artifact
//! writing. The binary is a thin wrapper around [`main`].

mod commands;
pub mod svg;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::io;

pub use commands::{ErgotestParams, Fig2Params, PdeParams, RecurrenceParams, SimulateParams};

/// Exit status for usage and validation failures.
pub const EXIT_USAGE: u8 = 2;
/// Exit status for numerical failures.
pub const EXIT_NUMERICAL: u8 = 3;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Parser)]
#[command(name = "logergo", version, about = "Log-ergodicity toolkit: EMO simulation, ergodicity tests, empirical Z paths and the ergodic Black-Scholes PDE")]
pub struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Replay a previously written manifest.json.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads; 0 picks the number of cores. Results do not depend on it.
    #[arg(long, global = true, env = "LOGERGO_THREADS", default_value_t = 0)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate log-price paths of a process spec.
    Simulate(commands::SimulateArgs),
    /// Mean-ergodicity test over a list of horizons.
    Ergotest(commands::ErgotestArgs),
    /// Empirical tamed path from a Date,Close price file.
    Fig2(commands::Fig2Args),
    /// Solve the ergodic Black-Scholes equation on a grid.
    Pde(commands::PdeArgs),
    /// Crossing times of a stored path through a level.
    Recurrence(commands::RecurrenceArgs),
}

/// Fully resolved parameters of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", content = "params", rename_all = "snake_case")]
pub enum RunParams {
    Simulate(SimulateParams),
    Ergotest(ErgotestParams),
    Fig2(Fig2Params),
    Pde(PdeParams),
    Recurrence(RecurrenceParams),
}

/// Written next to every run's outputs; `--config` replays it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    #[serde(flatten)]
    pub run: RunParams,
    /// Files produced, relative to the output directory.
    pub outputs: Vec<String>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Run(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Run(e) if e.is_numerical() => EXIT_NUMERICAL,
            _ => EXIT_USAGE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Run(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Run(e)
    }
}

fn resolve(cli: &Cli) -> Result<(u64, RunParams), CliError> {
    match (&cli.config, &cli.command) {
        (Some(_), Some(_)) => Err(CliError::Usage("--config replays a manifest and takes no subcommand".into())),
        (None, None) => Err(CliError::Usage("missing subcommand (see --help)".into())),
        (Some(path), None) => {
            let text = io::read_to_string(path)?;
            let manifest: Manifest = serde_json::from_str(&text).map_err(Error::from)?;
            Ok((manifest.seed, manifest.run))
        }
        (None, Some(cmd)) => {
            let run = match cmd {
                Command::Simulate(a) => RunParams::Simulate(a.resolve()?),
                Command::Ergotest(a) => RunParams::Ergotest(a.resolve()?),
                Command::Fig2(a) => RunParams::Fig2(a.resolve()?),
                Command::Pde(a) => RunParams::Pde(a.resolve()?),
                Command::Recurrence(a) => RunParams::Recurrence(a.resolve()?),
            };
            Ok((cli.seed, run))
        }
    }
}

/// Executes `run` and writes its outputs plus the manifest into `out`.
pub fn execute(run: &RunParams, seed: u64, out: &Path) -> Result<Manifest, CliError> {
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let outputs = match run {
        RunParams::Simulate(p) => commands::simulate(p, seed, out)?,
        RunParams::Ergotest(p) => commands::ergotest(p, seed, out)?,
        RunParams::Fig2(p) => commands::fig2(p, seed, out)?,
        RunParams::Pde(p) => commands::pde(p, out)?,
        RunParams::Recurrence(p) => commands::recurrence(p, out)?,
    };
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed,
        run: run.clone(),
        outputs,
    };
    io::write_json_atomic(out.join(MANIFEST_FILE), &manifest)?;
    Ok(manifest)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from<I, T>(args: I) -> Result<Manifest, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(e.to_string()))?;
    run_cli(&cli)
}

pub fn run_cli(cli: &Cli) -> Result<Manifest, CliError> {
    let (seed, run) = resolve(cli)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} threads: {e}", cli.threads)))?;
    pool.install(|| execute(&run, seed, &cli.out))
}

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run_cli(&cli) {
        Ok(manifest) => {
            for f in &manifest.outputs {
                println!("{}", cli.out.join(f).display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("logergo: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
