mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::RunArgs;

/// Contrast-set generation for NLI by rewriting sentence semantics.
#[derive(Parser)]
#[command(name = "lit", version, about)]
struct Cli {
    #[command(flatten)]
    run: RunArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write one contrast-record file per spec plus a coverage summary
    Transform,
    /// Write the originals plus non-compositional transforms as a training set
    Augment,
    /// Score model predictions against contrast records
    Eval {
        /// Contrast-record JSONL file, or a directory of them
        #[arg(long)]
        records: PathBuf,
        /// Prediction JSONL with pair_id, spec, pred_original, pred_contrast
        #[arg(long)]
        predictions: PathBuf,
    },
    /// Count tense, passive, may and it-cleft over a corpus (one sentence per line)
    Analyze {
        #[arg(long)]
        corpus: PathBuf,
    },
    /// Print the backend's raw reply to a PARSE request
    Parse { sentence: String },
    /// Print the backend's raw reply to a GENERATE request
    Generate { mrs: String },
    /// Answer protocol requests on stdin from --adapter-fixtures
    Serve,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = match cli.run.resolve() {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let outcome = match &cli.command {
        Command::Transform => commands::transform(&cfg),
        Command::Augment => commands::augment(&cfg),
        Command::Eval { records, predictions } => commands::eval(&cfg, records, predictions),
        Command::Analyze { corpus } => commands::analyze(&cfg, corpus),
        Command::Parse { sentence } => commands::parse(&cfg, sentence),
        Command::Generate { mrs } => commands::generate(&cfg, mrs),
        Command::Serve => commands::serve(&cfg),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
