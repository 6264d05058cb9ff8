//! `ramnet`: binarize CSV data, then train, evaluate and query WiSARD models.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage or data error,
//! 3 finished with warnings (rows a regression model could not answer).

mod commands;
mod data;
mod failure;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "ramnet",
    version,
    about = "Weightless neural networks: WiSARD, ClusWiSARD and regression variants"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Turn CSV features into JSONL bit rows.
    Binarize(BinarizeArgs),
    /// Train a model on JSONL rows, in file order.
    Train(TrainArgs),
    /// Score a saved model on labelled JSONL rows.
    Eval(EvalArgs),
    /// Write one prediction per JSONL row.
    Predict(PredictArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EncoderKind {
    Threshold,
    MeanThreshold,
    Thermometer,
    KernelCanvas,
}

#[derive(Debug, Args)]
pub struct BinarizeArgs {
    /// Input CSV (stdin if omitted).
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Output JSONL (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, required_unless_present = "encoder_file")]
    encoder: Option<EncoderKind>,
    /// Load the encoder from a saved document instead of flags.
    #[arg(long, conflicts_with = "encoder")]
    encoder_file: Option<PathBuf>,
    /// Save the encoder as a model document.
    #[arg(long)]
    save_encoder: Option<PathBuf>,
    /// Feature columns, e.g. `0-3,5` or header names. Defaults to every
    /// column that is not the label or target.
    #[arg(long)]
    features: Option<String>,
    /// Column passed through as the row label.
    #[arg(long, conflicts_with = "target")]
    label: Option<String>,
    /// Column passed through as the regression target.
    #[arg(long)]
    target: Option<String>,
    /// The first CSV line names the columns.
    #[arg(long)]
    header: bool,
    /// Threshold for the `threshold` encoder.
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
    /// Thermometer bits per feature.
    #[arg(long)]
    size: Option<usize>,
    /// Thermometer range minimum.
    #[arg(long, allow_hyphen_values = true)]
    min: Option<f64>,
    /// Thermometer range maximum.
    #[arg(long, allow_hyphen_values = true)]
    max: Option<f64>,
    /// Kernel canvas point dimension; each row is read as consecutive points.
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    kernels: Option<usize>,
    #[arg(long, default_value_t = 1)]
    bits_by_kernel: usize,
    #[arg(long, env = "RAMNET_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Wisard,
    Clus,
    Rew,
    Crew,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long, value_enum)]
    model: ModelKind,
    /// Training rows (stdin if omitted).
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Model document (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Address lines per RAM node (n).
    #[arg(long)]
    tuple_size: usize,
    #[arg(long, default_value_t = 2)]
    base: u32,
    /// Address 0 never votes.
    #[arg(long)]
    ignore_zero: bool,
    /// Weight class scores by training set size.
    #[arg(long)]
    balanced: bool,
    /// Initial bleaching threshold.
    #[arg(long, default_value_t = 0)]
    bleaching: u64,
    #[arg(long, default_value_t = 0.1)]
    min_score: f64,
    #[arg(long, default_value_t = 10)]
    threshold: u64,
    /// Maximum discriminators per class (clus) or predictors (crew).
    #[arg(long, default_value_t = 5)]
    limit: usize,
    /// Regression mean: simple, power, median, harmonic, harmonicPower,
    /// geometric, exponential or logistic.
    #[arg(long, default_value = "simple")]
    mean: String,
    /// Exponent for the power means.
    #[arg(long, allow_hyphen_values = true)]
    power: Option<f64>,
    #[arg(long, default_value_t = 0)]
    min_zero: usize,
    #[arg(long, default_value_t = 0)]
    min_one: usize,
    /// Pad the last tuple when the retina is not a multiple of n.
    #[arg(long)]
    complete_address: bool,
    #[arg(long, env = "RAMNET_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    Accuracy,
    Mae,
    Mse,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Saved model document.
    model: PathBuf,
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    metric: Metric,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// Saved model document.
    model: PathBuf,
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Binarize(args) => commands::binarize(&args),
        Command::Train(args) => commands::train(&args),
        Command::Eval(args) => commands::eval(&args),
        Command::Predict(args) => commands::predict(&args),
    };
    match result {
        Ok(outcome) => outcome.exit_code(),
        Err(failure) => {
            eprintln!("ramnet: {failure}");
            failure.exit_code()
        }
    }
}
