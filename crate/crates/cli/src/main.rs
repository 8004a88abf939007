//! `nblp`: synthesize circuits, simulate the NBLP algorithm, evaluate bounds.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nblp_core::Error;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ConditionViolated(_) => 3,
            _ => 2,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

/// A clap value enum that can also be read from a config file.
#[derive(Clone, Copy, Debug)]
pub struct Choice<E>(pub E);

impl<E: ValueEnum> FromStr for Choice<E> {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        E::from_str(s, true).map(Choice)
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PrepArg {
    Ideal,
    Qram,
    FastExact,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RealizationArg {
    Fresh,
    Fixed,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    PerBit,
    SharedRouting,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(
    name = "nblp",
    version,
    about = "Clifford+T toolkit for the quantum NBLP algorithm"
)]
pub struct Cli {
    /// Flat `key = value` file supplying defaults for any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Synthesize a circuit and report its resources.
    #[command(subcommand)]
    Synth(SynthKind),
    /// Run seeded episodes of the algorithm.
    Simulate(SimulateArgs),
    /// Evaluate the bounds and trade-off for one (n, q).
    Estimate(EstimateArgs),
    /// Evaluate the bounds over an (n, q) grid as CSV.
    Sweep(SweepArgs),
    /// Generate or inspect sample-set files.
    #[command(subcommand)]
    Samples(SamplesAction),
}

#[derive(Args, Debug, Default)]
pub struct OutputArgs {
    /// Report destination; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
pub struct CircuitOut {
    /// Also write the circuit in text form to this path.
    #[arg(long)]
    pub circuit: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum SynthKind {
    Qram(QramArgs),
    Qft(QftArgs),
    Aqft(AqftArgs),
    Bv(BvArgs),
}

#[derive(Args, Debug)]
pub struct QramArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    /// Memory table JSON; defaults to cell `gamma` holding `gamma mod 2^n` and label 0.
    #[arg(long)]
    pub memory: Option<PathBuf>,
    #[arg(long)]
    pub mode: Option<Choice<ModeArg>>,
    #[command(flatten)]
    pub circuit: CircuitOut,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct QftArgs {
    #[arg(long)]
    pub l: Option<usize>,
    #[command(flatten)]
    pub circuit: CircuitOut,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct AqftArgs {
    #[arg(long)]
    pub l: Option<usize>,
    /// Rotation cutoff; derived from `--delta` when omitted.
    #[arg(long)]
    pub beta: Option<usize>,
    /// Target approximation error.
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub c_rz: Option<f64>,
    #[arg(long)]
    pub rz_precision: Option<f64>,
    #[command(flatten)]
    pub circuit: CircuitOut,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct BvArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub circuit: CircuitOut,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Secret bit string; drawn from the seed when omitted.
    #[arg(long)]
    pub secret: Option<String>,
    #[arg(long)]
    pub shots: Option<usize>,
    #[arg(long)]
    pub prep_mode: Option<Choice<PrepArg>>,
    #[arg(long)]
    pub realization: Option<Choice<RealizationArg>>,
    /// Sample-set JSON to use as the fixed realization.
    #[arg(long)]
    pub samples: Option<PathBuf>,
    /// Successes to vote over; all successes when omitted.
    #[arg(long)]
    pub m_target: Option<usize>,
    /// Omit the per-episode list from JSON output.
    #[arg(long)]
    pub summary_only: bool,
    #[arg(long)]
    pub format: Option<Choice<FormatArg>>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub mode: Option<Choice<ModeArg>>,
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    #[command(flatten)]
    pub bounds: BoundsArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long)]
    pub n_min: Option<usize>,
    /// Defaults to `--n-min`.
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long)]
    pub q_min: Option<usize>,
    /// Defaults to each row's `n`.
    #[arg(long)]
    pub q_max: Option<usize>,
    #[command(flatten)]
    pub bounds: BoundsArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Subcommand, Debug)]
pub enum SamplesAction {
    /// Draw the fixed realization of a seeded instance.
    Generate(GenerateArgs),
    /// Summarize a sample-set file.
    Inspect(InspectArgs),
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub secret: Option<String>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct InspectArgs {
    pub file: PathBuf,
    #[command(flatten)]
    pub out: OutputArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
