//! Command-line front end.
//!
//! One pipeline per invocation: machine-readable results on stdout as a
//! single JSON line, diagnostics and warnings on stderr. Exit codes: 0 on
//! success, 1 on any pipeline error, 2 on usage errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde::Serialize;

use crate::pipeline::{run_pipeline, DiagramMode, PipelineResult, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Linear,
    Circular,
}

#[derive(Debug, Parser)]
#[command(
    name = "palette-diagram",
    about = "Order categorical datasets by 1-D embedding and render a palette diagram as SVG"
)]
struct Cli {
    /// Input file: CSV, or JSON when the extension is .json
    #[arg(long)]
    input: PathBuf,

    /// Output SVG path
    #[arg(long)]
    output: PathBuf,

    /// Diagram type
    #[arg(long, value_enum, default_value = "circular")]
    mode: ModeArg,

    /// Neighbor count for the k-NN graph (clamped to N-1)
    #[arg(long = "n-neighbors", default_value_t = 10)]
    n_neighbors: usize,

    /// SGD learning rate for the circular embedding
    #[arg(long, default_value_t = 0.05)]
    eta: f64,

    /// SGD epochs per restart
    #[arg(long, default_value_t = 1000)]
    epochs: usize,

    /// Seed for angle initialization (restart r uses seed + r)
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Number of independent restarts; the lowest-stress one wins
    #[arg(long, default_value_t = 5)]
    restarts: usize,

    /// Treat the first input row as category names (CSV only)
    #[arg(long)]
    header: bool,

    /// Scale each row to sum to 1 before embedding
    #[arg(long)]
    normalize_rows: bool,

    /// Keep raw geodesic distances instead of rescaling the maximum to 2
    #[arg(long)]
    no_rescale: bool,
}

impl Cli {
    fn into_config(self) -> RunConfig {
        RunConfig {
            input_path: self.input,
            output_path: self.output,
            mode: match self.mode {
                ModeArg::Linear => DiagramMode::Linear,
                ModeArg::Circular => DiagramMode::Circular,
            },
            k: self.n_neighbors,
            eta: self.eta,
            epochs: self.epochs,
            seed: self.seed,
            restarts: self.restarts,
            has_header: self.header,
            normalize_rows: self.normalize_rows,
            rescale_max: if self.no_rescale { None } else { Some(2.0) },
        }
    }
}

#[derive(Serialize)]
struct Report<'a> {
    mode: &'a str,
    order: &'a [usize],
    #[serde(skip_serializing_if = "Option::is_none")]
    final_stress: Option<f64>,
}

fn report_line(mode: DiagramMode, result: &PipelineResult) -> String {
    serde_json::to_string(&Report {
        mode: mode.as_str(),
        order: &result.order,
        final_stress: result.final_stress,
    })
    .expect("report serialization cannot fail")
}

/// Entry point used by the binary. Parses arguments (exiting 2 on usage
/// errors), runs the pipeline, and reports results.
pub fn main() -> ExitCode {
    let config = Cli::parse().into_config();
    match run_pipeline(&config) {
        Ok(result) => {
            for warning in &result.warnings {
                eprintln!("warning: {warning}");
            }
            println!("{}", report_line(config.mode, &result));
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error[{}]: {err}", err.name());
            ExitCode::FAILURE
        }
    }
}
