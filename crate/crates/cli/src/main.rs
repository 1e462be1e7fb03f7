mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use trajgnn::chaincode::Profile;
use trajgnn::pipeline::Threshold;

/// Handwritten trajectory recognition with chain-code graphs and a GCN.
#[derive(Debug, Parser)]
#[command(name = "trajgnn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Convert IDX images or JSON Lines strokes into a graph dataset file.
    Prepare(PrepareArgs),
    /// Train a model and write it with a per-epoch metrics CSV.
    Train(TrainArgs),
    /// Print the error rate and confusion matrix of a model on a dataset.
    Eval(EvalArgs),
    /// Print the predicted class of every sample.
    Predict(PredictArgs),
    /// Dump the recovered path, chain code and graph of one sample.
    Inspect(InspectArgs),
    /// Write a synthetic digit-like stroke set as JSON Lines.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// IDX image file (optionally gzip-compressed).
    #[arg(long, conflicts_with = "strokes")]
    pub images: Option<PathBuf>,
    /// IDX label file matching --images.
    #[arg(long, requires = "images")]
    pub labels: Option<PathBuf>,
    /// JSON Lines stroke file.
    #[arg(long)]
    pub strokes: Option<PathBuf>,
    /// offline (41 codes) or online (25 codes); defaults by input kind.
    #[arg(long)]
    pub profile: Option<Profile>,
    /// Binarization level 0..=255, or "otsu".
    #[arg(long, default_value = "128")]
    pub threshold: Threshold,
    /// Use only the first N samples.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub limit: Option<u64>,
}

#[derive(Debug, Args)]
pub struct PrepareArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Output dataset file.
    #[arg(long)]
    pub out: PathBuf,
    /// Class count; defaults to 10 for IDX input and max label + 1 for strokes.
    #[arg(long)]
    pub classes: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    /// Held-out dataset; when given, --dataset is used whole for training.
    #[arg(long)]
    pub test_dataset: Option<PathBuf>,
    /// Output model file.
    #[arg(long)]
    pub model: PathBuf,
    /// Metrics CSV; defaults to the model path with a .csv extension.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the held-out split of --dataset to this file.
    #[arg(long, conflicts_with = "test_dataset")]
    pub split: Option<PathBuf>,
    #[arg(long, default_value_t = 50)]
    pub epochs: usize,
    #[arg(long, default_value_t = 64)]
    pub batch_size: usize,
    #[arg(long, default_value_t = 0.01)]
    pub lr: f64,
    #[arg(long, default_value_t = 0.8)]
    pub train_fraction: f64,
    #[arg(long, default_value_t = 17)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub dataset: PathBuf,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Prepared dataset; alternatively give raw input below.
    #[arg(long, conflicts_with_all = ["images", "strokes"])]
    pub dataset: Option<PathBuf>,
    #[command(flatten)]
    pub input: InputArgs,
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Sample index, 0-based.
    #[arg(long, default_value_t = 0)]
    pub index: usize,
    /// Write the graph in DOT format to this file.
    #[arg(long)]
    pub dot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 200)]
    pub per_class: usize,
    #[arg(long, default_value_t = 17)]
    pub seed: u64,
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(raw) = std::env::var("TGNN_THREADS") {
        let n: usize = raw
            .parse()
            .map_err(|_| anyhow::anyhow!("TGNN_THREADS must be a positive integer, got {raw:?}"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    configure_threads()?;
    match cli.command {
        Command::Prepare(a) => commands::prepare(&a),
        Command::Train(a) => commands::train(&a),
        Command::Eval(a) => commands::eval(&a),
        Command::Predict(a) => commands::predict(&a),
        Command::Inspect(a) => commands::inspect(&a),
        Command::Synth(a) => commands::synth(&a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            match err.downcast_ref::<commands::CliError>() {
                Some(commands::CliError::MissingInput(_)) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
