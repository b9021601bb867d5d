use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use segkappa::conditioning::ConditioningKind;
use segkappa_cli::{cmd_analyze, cmd_condition, cmd_kappa, cmd_summary, Formats, RunConfig};

/// Inter-annotator agreement analysis for binary segmentation masks.
#[derive(Parser)]
#[command(name = "segkappa", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline: ingest, condition, score, summarize, report.
    Analyze {
        /// Mask directory or manifest CSV (header `lesion_id,mask_path`).
        #[arg(long)]
        input: PathBuf,
        /// Directory for the report artifacts.
        #[arg(long)]
        out: PathBuf,
        /// Conditionings to evaluate (comma separated).
        #[arg(long, value_delimiter = ',', default_values_t = ConditioningKind::ALL)]
        conditionings: Vec<ConditioningKind>,
        /// Side of the square structuring element (odd).
        #[arg(long, default_value_t = 5)]
        se_side: usize,
        /// Histogram bin count over [-1, 1].
        #[arg(long, default_value_t = 40)]
        bins: usize,
        /// Output formats (comma separated subset of csv,json,svg).
        #[arg(long, value_delimiter = ',', default_values_t = ["csv".to_string(), "json".to_string(), "svg".to_string()])]
        formats: Vec<String>,
        /// Seed for the strip-plot jitter.
        #[arg(long, default_value_t = 0)]
        jitter_seed: u64,
        /// Worker threads (default: all cores). Output does not depend on this.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Apply one conditioning to every mask file, writing `_<kind>` copies.
    Condition {
        /// Mask file or directory of PNG masks.
        #[arg(long)]
        input: PathBuf,
        /// Conditioning to apply.
        #[arg(long)]
        kind: ConditioningKind,
        /// Side of the square structuring element (odd).
        #[arg(long, default_value_t = 5)]
        se_side: usize,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the Cohen's Kappa between two mask files.
    Kappa {
        path_a: PathBuf,
        path_b: PathBuf,
    },
    /// Print the annotation-count table for a dataset.
    Summary {
        /// Mask directory or manifest CSV.
        #[arg(long)]
        input: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze {
            input,
            out,
            conditionings,
            se_side,
            bins,
            formats,
            jitter_seed,
            threads,
        } => Formats::from_names(&formats).and_then(|formats| {
            cmd_analyze(&RunConfig {
                input,
                output_dir: out,
                conditionings,
                se_side,
                bins,
                formats,
                jitter_seed,
                threads,
            })
        }),
        Command::Condition {
            input,
            kind,
            se_side,
            out,
        } => cmd_condition(&input, kind, se_side, &out),
        Command::Kappa { path_a, path_b } => cmd_kappa(&path_a, &path_b),
        Command::Summary { input } => cmd_summary(&input),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
