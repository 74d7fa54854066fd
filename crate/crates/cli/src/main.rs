//! `rulelattice` command-line interface.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 internal invariant
//! violation.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "rulelattice",
    version,
    about = "Fuzzy rule induction over an environment lattice"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Learn one-vs-rest rule bases from a CSV and write a model file.
    Train(TrainArgs),
    /// Classify labeled rows with a model and print the accuracy report.
    Evaluate(EvaluateArgs),
    /// Classify one input vector.
    Predict(PredictArgs),
    /// Print a model's rules.
    Inspect(InspectArgs),
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    class_column: String,
    /// Linguistic labels per variable.
    #[arg(long, default_value_t = 7)]
    labels: usize,
    /// Fraction of rows used for training.
    #[arg(long, default_value_t = 0.8)]
    split: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = TieArg::Strict)]
    tie_policy: TieArg,
    #[arg(long, value_enum, default_value_t = ScoringArg::Positive)]
    scoring: ScoringArg,
    /// Tolerance on degree comparisons in subsumption.
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
    #[arg(long, value_enum, default_value_t = OnOff::On)]
    prune: OnOff,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    /// Defaults to the class column recorded in the model.
    #[arg(long)]
    class_column: Option<String>,
    /// Evaluate only the held-out side of the model's recorded split.
    #[arg(long)]
    holdout: bool,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    /// Comma-separated input values, e.g. "5.1,3.5,1.4,0.2".
    #[arg(long, allow_hyphen_values = true)]
    input: String,
}

#[derive(Args)]
struct InspectArgs {
    #[arg(long)]
    model: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum TieArg {
    Strict,
    DropTies,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScoringArg {
    Positive,
    Difference,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OnOff {
    On,
    Off,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Train(a) => commands::train(&a),
        Command::Evaluate(a) => commands::evaluate(&a),
        Command::Predict(a) => commands::predict(&a),
        Command::Inspect(a) => commands::inspect(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
