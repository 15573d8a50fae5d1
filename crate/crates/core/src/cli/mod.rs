//! Command-line pipeline: elicitation, reporting, exposure analytics, the
//! event study, and the equilibrium-model simulation/verification commands.
//!
//! Exit codes: 0 success, 1 verification or analysis failure, 2 usage or
//! configuration error.

mod commands;
mod config;
mod render;

pub use commands::{
    cmd_bias, cmd_elicit, cmd_eventstudy, cmd_exposure, cmd_report, cmd_simulate,
    cmd_verify_theorem, read_bias_file, EventStudyArgs, SimulateArgs, VerifyArgs,
};
pub use config::{AnalysisConfig, RunConfig};
pub use render::{car_table, distribution_table, exposure_table, percent, percent_starred};

use std::path::PathBuf;

use clap::{Parser, Subcommand};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Analysis(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Analysis(_) => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "sentibias", version, about = "Company-name sentiment-bias toolkit")]
pub struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Master seed for stochastic commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Response-cache directory (overrides the config value).
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run paired-prompt elicitation over a document file.
    Elicit {
        /// docs.jsonl input.
        #[arg(long)]
        docs: PathBuf,
        /// Backend name from the config, or the built-in "mock".
        #[arg(long, default_value = "mock")]
        backend: String,
        /// Model identifier passed to the backend.
        #[arg(long, default_value = "mock-model")]
        model: String,
        /// Output bias.jsonl.
        #[arg(long)]
        out: PathBuf,
    },
    /// Render the bias-distribution table from one or more bias.jsonl files.
    Report {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Emit the per-model bias histogram as distribution.csv.
    Bias {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Group-mean factor exposures and spreads for one bias file.
    Exposure {
        #[arg(long)]
        bias: PathBuf,
        #[arg(long)]
        docs: PathBuf,
        #[arg(long)]
        exposures: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// FF5 event study: group CAR paths, horizon snapshots, significance.
    Eventstudy(EventStudyArgs),
    /// Simulate bias/price paths from the equilibrium model.
    Simulate(SimulateArgs),
    /// Verify the closed-form price against market clearing.
    VerifyTheorem(VerifyArgs),
}

/// Run the CLI and return the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(cache) = &cli.cache {
        config.cache_root = cache.clone();
    }
    match &cli.command {
        Command::Elicit {
            docs,
            backend,
            model,
            out,
        } => cmd_elicit(&config, docs, backend, model, out),
        Command::Report { inputs } => cmd_report(inputs),
        Command::Bias { inputs, out } => cmd_bias(inputs, out),
        Command::Exposure {
            bias,
            docs,
            exposures,
            out,
        } => cmd_exposure(&config, bias, docs, exposures, out.as_deref()),
        Command::Eventstudy(args) => cmd_eventstudy(&config, args),
        Command::Simulate(args) => cmd_simulate(args, cli.seed),
        Command::VerifyTheorem(args) => cmd_verify_theorem(args, cli.seed),
    }
}
