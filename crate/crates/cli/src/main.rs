mod commands;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gridcover::Q;

#[derive(Parser, Debug)]
#[command(name = "gridcover", version, about = "Covering paths on grids under the l1 metric")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct CostArgs {
    /// Coverage radius (decimal or p/q)
    #[arg(long, value_parser = parse_q)]
    k: Q,
    /// Cost per unit of path length
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Cost per stop
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
}

#[derive(Args, Debug, Clone)]
struct BuildArgs {
    /// Lattice spacing override, in (0, 2k]
    #[arg(long, value_parser = parse_q)]
    d: Option<Q>,
    /// Try n x n lattice translations and keep the cheapest
    #[arg(long, default_value_t = 0)]
    scan_phase: u32,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the lower and upper cost bounds
    Bounds {
        /// Grid file ('#'/'.' mask or grid JSON)
        #[arg(long, required_unless_present = "area")]
        grid: Option<PathBuf>,
        /// Area, when no grid is given
        #[arg(long, requires = "perimeter", conflicts_with = "grid")]
        area: Option<u64>,
        /// Perimeter, when no grid is given
        #[arg(long, requires = "area")]
        perimeter: Option<u64>,
        #[command(flatten)]
        cost: CostArgs,
    },
    /// Build a covering path and write it as JSON
    Construct {
        #[arg(long)]
        grid: PathBuf,
        #[command(flatten)]
        cost: CostArgs,
        #[command(flatten)]
        build: BuildArgs,
        /// Path JSON destination (stdout when absent)
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Also write an SVG rendering
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Check that a path's stops cover the grid (exit 0 / 2 / 3)
    Verify {
        #[arg(long)]
        grid: PathBuf,
        /// Path JSON as written by `construct` or `oracle`
        #[arg(long)]
        path: PathBuf,
        #[arg(long, value_parser = parse_q)]
        k: Q,
        /// Sample spacing (default k/16)
        #[arg(long, value_parser = parse_q)]
        h: Option<Q>,
        /// Report inconclusive samples instead of running the exact sweep
        #[arg(long)]
        sampling_only: bool,
    },
    /// Lattice-restricted optimum for tiny grids
    Oracle {
        #[arg(long)]
        grid: PathBuf,
        #[command(flatten)]
        cost: CostArgs,
        /// Candidate lattice spacing
        #[arg(long, value_parser = parse_q, default_value = "1/2")]
        spacing: Q,
        #[arg(long, default_value_t = 24)]
        max_candidates: usize,
        #[arg(long, default_value_t = 10)]
        max_subset: usize,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Ratio study on seeded random grids, written as CSV
    Benchmark {
        #[command(flatten)]
        cost: CostArgs,
        #[arg(long, env = "GRIDCOVER_SEED", default_value_t = 1)]
        seed: u64,
        /// Number of random grids (areas 1 to 400)
        #[arg(long, default_value_t = 20)]
        count: usize,
        /// Number of extra tiny grids the oracle can solve
        #[arg(long, default_value_t = 5)]
        tiny: usize,
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Also write every constructed path as a JSON array
        #[arg(long)]
        paths: Option<PathBuf>,
    },
    /// Draw the grid, lattice cells, stops and path as SVG
    Render {
        #[arg(long)]
        grid: PathBuf,
        #[command(flatten)]
        cost: CostArgs,
        #[command(flatten)]
        build: BuildArgs,
        /// Draw this path instead of the constructed one
        #[arg(long)]
        path: Option<PathBuf>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn parse_q(text: &str) -> Result<Q, String> {
    gridcover::rational::parse(text).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { commands::EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("gridcover: {e}");
            ExitCode::from(e.code())
        }
    }
}
