//! `percolab`: command-line front end for the percolation laboratory.
//!
//! Exit codes: 0 success, 1 I/O or other failure, 2 usage error,
//! 3 violated precondition, 4 size guard exceeded, 5 malformed input
//! (graph file, family spec).

mod bounds;
mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::Format;

#[derive(Parser)]
#[command(name = "percolab", version, about = "Bond percolation laboratory for finite graphs")]
pub struct Cli {
    /// Master seed for every random draw.
    #[arg(long, global = true, env = "PERCOLAB_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Record wall-clock runtime in the output (makes it run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// Exactly one graph source.
#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
pub struct GraphSource {
    /// Family spec such as `cycle:8`, `box:3,8`, `rr:10000,3,seed=7`.
    #[arg(long)]
    pub family: Option<String>,
    /// Edge-list file: `n m` header, then one `u v` line per edge.
    #[arg(long)]
    pub graph: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum Command {
    /// Generate a graph and write it as an edge list.
    Gen {
        #[arg(long)]
        family: String,
    },
    /// Degrees, diameter, connectivity and girth.
    Metrics {
        #[command(flatten)]
        source: GraphSource,
    },
    /// Edge or vertex isoperimetric constant, exact or by local search.
    Cheeger {
        #[command(flatten)]
        source: GraphSource,
        /// Vertex boundary instead of edge boundary.
        #[arg(long)]
        vertex: bool,
        /// Local-search upper bound with this many iterations instead of
        /// the exact value (edge boundary only).
        #[arg(long)]
        upper: Option<u64>,
        #[arg(long, default_value_t = percolab::isoperimetry::DEFAULT_WORK_LIMIT)]
        work_limit: u64,
    },
    /// One configuration of G(p) and its component sizes.
    Percolate {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long)]
        p: f64,
        /// Component sizes counted in the output.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        thresholds: Vec<usize>,
    },
    /// Newman-Ziff sweep over all edge counts.
    Sweep {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        thresholds: Vec<usize>,
        /// Smoothed fixed-p table on this many grid points instead of the
        /// per-edge-count table.
        #[arg(long)]
        canonical: Option<usize>,
    },
    /// Exact cluster statistics by full enumeration (at most 24 edges).
    Oracle {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        thresholds: Vec<usize>,
    },
    /// Probability that the coupled edge is pivotal, against the bound.
    Pivotal {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
        /// Up-set: `large:S`, `edges:T` or `z:C,I`; repeatable.
        #[arg(long, required = true)]
        upset: Vec<String>,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        /// Margin of the bound's p-interval `[x, 1 - x]`.
        #[arg(long, default_value_t = 0.25)]
        x: f64,
        /// Exact enumeration (at most 20 edges) instead of Monte Carlo.
        #[arg(long)]
        exact: bool,
    },
    /// Closed-form bounds; each flag takes `key=value,...`.
    Bounds(bounds::BoundsArgs),
    /// Seeded experiment recipes producing reports.
    Experiment {
        #[command(subcommand)]
        which: commands::Experiment,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
