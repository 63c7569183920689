//! `mlia`: exact GDoF bounds, scheme construction and link simulation for
//! the K-user asymmetric interference channel.

mod commands;
mod config;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mlia::{Error, ErrorKind};

use config::RunConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}: {1}")]
    Io(PathBuf, std::io::Error),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => match e.kind() {
                ErrorKind::Validation => 1,
                ErrorKind::Certification => 2,
                ErrorKind::ResourceCap => 3,
            },
            CliError::Io(..) | CliError::Csv(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "mlia", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimal and achievable sum GDoF.
    Gdof(Flags),
    /// The converse bound family and its certification.
    Bounds(Flags),
    /// Layer plan, dimension-set sizes and power normalization.
    Scheme(Flags),
    /// Monte Carlo successive decoding over a power grid.
    Simulate(Flags),
    /// Minimum distances and residual-interference bounds over a power grid.
    Mindist(Flags),
}

/// Every flag can also be set in the `--config` file, under the same name.
#[derive(Debug, Args)]
struct Flags {
    /// File of `key = value` lines; flags given here override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of users (bounds only, when no alphas are given).
    #[arg(long)]
    k: Option<String>,
    /// Sorted link strengths, each "p/q" or an exact decimal.
    #[arg(long)]
    alphas: Option<String>,
    /// Alignment parameter; gdof accepts a comma list.
    #[arg(long)]
    n: Option<String>,
    /// Rate backoff (default: a tenth of the smallest layer rate).
    #[arg(long)]
    eps: Option<String>,
    /// Power for `scheme`.
    #[arg(long)]
    power: Option<String>,
    /// Power grid: comma list, or decades "a..b" meaning 10^a..10^b.
    #[arg(long)]
    powers: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long = "h-min")]
    h_min: Option<String>,
    #[arg(long = "h-max")]
    h_max: Option<String>,
    #[arg(long = "noise-std")]
    noise_std: Option<String>,
    /// SER below which a cell counts toward the GDoF estimate.
    #[arg(long)]
    reliability: Option<String>,
    /// Largest decision space a layer decoder may enumerate.
    #[arg(long)]
    cap: Option<String>,
    /// json or csv.
    #[arg(long)]
    format: Option<String>,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<String>,
}

impl Flags {
    fn resolve(self) -> Result<RunConfig, CliError> {
        let mut map = match &self.config {
            Some(path) => config::read_file(path)?,
            None => BTreeMap::new(),
        };
        let flags = [
            ("k", self.k),
            ("alphas", self.alphas),
            ("n", self.n),
            ("eps", self.eps),
            ("power", self.power),
            ("powers", self.powers),
            ("trials", self.trials),
            ("seed", self.seed),
            ("h-min", self.h_min),
            ("h-max", self.h_max),
            ("noise-std", self.noise_std),
            ("reliability", self.reliability),
            ("cap", self.cap),
            ("format", self.format),
            ("out", self.out),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                map.insert(key.to_string(), v);
            }
        }
        RunConfig::from_map(&map)
    }
}

type Handler = fn(&RunConfig) -> Result<Vec<u8>, CliError>;

fn run(cli: Cli) -> Result<(), CliError> {
    let (flags, f): (Flags, Handler) = match cli.command {
        Command::Gdof(a) => (a, commands::gdof),
        Command::Bounds(a) => (a, commands::bounds),
        Command::Scheme(a) => (a, commands::scheme),
        Command::Simulate(a) => (a, commands::simulate),
        Command::Mindist(a) => (a, commands::mindist),
    };
    let cfg = flags.resolve()?;
    let bytes = f(&cfg)?;
    match &cfg.out {
        Some(path) => std::fs::write(path, &bytes).map_err(|e| CliError::Io(path.clone(), e)),
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| CliError::Io("stdout".into(), e)),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
