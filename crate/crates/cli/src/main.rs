//! `gaplab`: command-line driver for the spectral-gap verification harness.

mod commands;
mod domain;
mod plot;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "gaplab",
    version,
    about = "Spectral-gap numerics and verification harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// First Dirichlet eigenvalue of -u'' + q u on an interval.
    #[command(name = "solve-1d")]
    Solve1d(Solve1dArgs),
    /// Dirichlet or Neumann eigenvalues of a convex polygon.
    #[command(name = "solve-2d")]
    Solve2d(Solve2dArgs),
    /// Stratified rearrangement of a test function and its constrained eigenvalue.
    Rearrange(RearrangeArgs),
    /// Weighted equipartition of a convex polygon with per-cell diagnostics.
    Partition(PartitionArgs),
    /// Fundamental gap against 3π²/D² with the rigidity margin.
    #[command(name = "gap-check")]
    GapCheck(CheckArgs),
    /// First Neumann eigenvalue against π²/D².
    #[command(name = "neumann-check")]
    NeumannCheck(CheckArgs),
    /// One-dimensional weighted eigenvalue along random chords.
    Localized(LocalizedArgs),
    /// Excess over the floor across a domain family, with a log-log slope fit.
    Sweep(SweepArgs),
}

/// Output locations. The JSON report goes to standard output unless `--out` is set.
#[derive(Args, Debug, Serialize)]
pub struct Output {
    /// JSON report path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV table path.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Directory for SVG overlays.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct Solve1dArgs {
    /// Preset (`tan3`, `tan2`, `tan4`, `free`, `truncated:<d>`) or a potential JSON file.
    #[arg(long)]
    pub potential: String,
    /// Cells on the coarse grid; the fine grid has twice as many.
    #[arg(long, default_value_t = 4096)]
    pub n: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Serialize)]
pub struct Solve2dArgs {
    #[arg(long)]
    pub domain: String,
    /// `dirichlet` or `neumann`.
    #[arg(long, default_value = "dirichlet")]
    pub kind: String,
    /// Number of Dirichlet eigenvalues, at most 3 (default 2). Neumann solves
    /// return only the first nonzero eigenvalue.
    #[arg(long)]
    pub k: Option<usize>,
    /// Grid spacing; defaults to width / 60.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Seed for `random:<k>` domains without an explicit seed.
    #[arg(long, env = "GAPLAB_SEED")]
    pub seed: Option<u64>,
    /// PGM heatmap of the last eigenfunction.
    #[arg(long)]
    pub pgm: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Serialize)]
pub struct RearrangeArgs {
    /// Test-function JSON `{"xs": [...], "values": [...]}` on [-π/2, π/2]; random when absent.
    #[arg(long)]
    pub function: Option<PathBuf>,
    /// Bumps in the random test function.
    #[arg(long, default_value_t = 3)]
    pub bumps: usize,
    /// Cells of the random test function.
    #[arg(long, default_value_t = 400)]
    pub n: usize,
    /// Grid for the constrained eigenvalue.
    #[arg(long, default_value_t = 512)]
    pub eta_n: usize,
    #[arg(long, env = "GAPLAB_SEED")]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Serialize)]
pub struct PartitionArgs {
    #[arg(long)]
    pub domain: String,
    /// `u1sq` partitions u₂/u₁ with weight u₁²; `one` the Neumann mode with weight 1.
    #[arg(long, default_value = "u1sq")]
    pub weight: String,
    /// `l2` or `measure`.
    #[arg(long, default_value = "l2")]
    pub kind: String,
    /// Number of cells, a power of two.
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Also solve the weighted Neumann problem on every cell (L² kind only).
    #[arg(long)]
    pub mean_value: bool,
    /// Cells across each partition cell's width for `--mean-value`.
    #[arg(long, default_value_t = 40.0)]
    pub cells_across: f64,
    #[arg(long, env = "GAPLAB_SEED")]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Serialize)]
pub struct CheckArgs {
    #[arg(long)]
    pub domain: String,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, env = "GAPLAB_SEED")]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Serialize)]
pub struct LocalizedArgs {
    #[arg(long)]
    pub domain: String,
    /// Number of random chords.
    #[arg(long, default_value_t = 20)]
    pub chords: usize,
    /// Explicit chord `x0,y0,x1,y1`; replaces the random ones.
    #[arg(long)]
    pub chord: Option<String>,
    /// Concavity exponent of the profile (h ≡ 1 is concave for every m ≥ 1).
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, env = "GAPLAB_SEED")]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Serialize)]
pub struct SweepArgs {
    /// `rects`, `sectors`, `ngons[:k]` or `random[:k[:seed]]`.
    #[arg(long, default_value = "rects")]
    pub family: String,
    /// Comma-separated family parameters.
    #[arg(long, value_delimiter = ',', default_value = "0.4,0.2,0.1,0.05")]
    pub params: Vec<f64>,
    /// `dirichlet` or `neumann`.
    #[arg(long, default_value = "neumann")]
    pub mode: String,
    /// Cells across each member's width.
    #[arg(long, default_value_t = 40.0)]
    pub cells_across: f64,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, env = "GAPLAB_SEED")]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub output: Output,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Solve1d(a) => commands::solve_1d(a),
        Command::Solve2d(a) => commands::solve_2d(a),
        Command::Rearrange(a) => commands::rearrange(a),
        Command::Partition(a) => commands::partition(a),
        Command::GapCheck(a) => commands::gap_check(a),
        Command::NeumannCheck(a) => commands::neumann_check(a),
        Command::Localized(a) => commands::localized(a),
        Command::Sweep(a) => commands::sweep(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(msg) => {
            eprintln!("gaplab: {msg}");
            ExitCode::from(1)
        }
    }
}
