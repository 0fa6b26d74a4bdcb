use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use redistwalk::acceptance::{self, Mutation};
use redistwalk::coupling::CouplingKind;

mod commands;
mod config;

use config::{CommonArgs, PairArgs, RunConfig};

/// Lazy random walk with boundary redistribution on {0..N}: exact total
/// variation, spectral quantities, and coupling-time audits.
///
/// Exit status is 0 when every audit passes, 1 when one fails, 2 on bad input.
#[derive(Parser)]
#[command(name = "redistwalk", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact distance curves (pair, sup, tilde) and the pair-to-sup inequality audit
    Tv {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        pair: PairArgs,
    },
    /// L0, lambda(L0), the three sine eigenfunctions and spectrum membership
    Spectral {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Simulate a coupling and audit its coupling time against the exact bound
    Couple {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        pair: PairArgs,
        /// Run only this coupling (default: every one the spec admits)
        #[arg(long, value_enum)]
        coupling: Option<KindArg>,
    },
    /// Run the built-in acceptance suite and print a JSON report
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Deterministic,
    Symmetric,
}

impl From<KindArg> for CouplingKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Deterministic => CouplingKind::Deterministic,
            KindArg::Symmetric => CouplingKind::Symmetric,
        }
    }
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = acceptance::Config::default().seed)]
    seed: u64,
    /// Trials per Monte Carlo batch
    #[arg(long, default_value_t = acceptance::Config::default().trials)]
    trials: u64,
    /// Steps per marginal audit
    #[arg(long, default_value_t = acceptance::Config::default().marginal_steps)]
    marginal_steps: u64,
    #[arg(long, default_value_t = acceptance::Config::default().horizon)]
    horizon: u64,
    #[arg(long)]
    threads: Option<usize>,
    /// Comma-separated criterion numbers (default: all)
    #[arg(long, value_delimiter = ',')]
    only: Vec<u8>,
    /// Also write the JSON report to this file
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Add this offset to every closed-form lambda(L), to check the suite catches it
    #[arg(long, hide = true, allow_negative_numbers = true)]
    mutate_lambda: Option<f64>,
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Tv { common, pair } => commands::tv(&RunConfig::resolve(&common, &pair)?),
        Command::Spectral { common } => commands::spectral(&RunConfig::resolve(&common, &PairArgs::default())?),
        Command::Couple { common, pair, coupling } => {
            commands::couple(&RunConfig::resolve(&common, &pair)?, coupling.map(Into::into))
        }
        Command::Verify(a) => {
            if a.threads == Some(0) {
                anyhow::bail!("threads must be at least 1");
            }
            let config = acceptance::Config {
                seed: a.seed,
                trials: a.trials,
                marginal_steps: a.marginal_steps,
                horizon: a.horizon,
                threads: a.threads,
                mutation: a.mutate_lambda.map(Mutation::LambdaOffset),
            };
            commands::verify(&commands::VerifyOptions { config, only: a.only, out: a.out })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
