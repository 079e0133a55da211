//! `qobdd`: generate, solve, check, extract, verify, bench and analyze.

mod commands;
mod failure;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use failure::Failure;

#[derive(Debug, Parser)]
#[command(
    name = "qobdd",
    version,
    about = "OBDD-based QBF solving, proof checking and strategy extraction"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Seed for every random choice of the run.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    /// OBDD node budget per manager.
    #[arg(long, global = true, default_value_t = qobdd_core::obdd::DEFAULT_NODE_BUDGET)]
    pub budget: usize,
    /// Worker threads for `bench` (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Emit a formula as QDIMACS.
    Gen(GenArgs),
    /// Decide a QDIMACS formula, optionally writing the proof trace.
    Solve(SolveArgs),
    /// Replay a proof trace against its formula.
    Check(CheckArgs),
    /// Read a universal strategy off a refutation.
    Extract(ExtractArgs),
    /// Check that a strategy falsifies the matrix on every existential play.
    Verify(VerifyArgs),
    /// Solve a family over a range of sizes and tabulate width and size.
    Bench(BenchArgs),
    /// Rectangle analysis of the inner product on a graph.
    #[command(subcommand)]
    Rect(RectCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenFamily {
    Quparity,
    Eqprime,
    Ipg,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    pub family: GenFamily,
    /// Size parameter of `quparity` and `eqprime`.
    pub n: Option<usize>,
    /// Edge list for `ipg`.
    #[arg(long, conflicts_with = "regular")]
    pub graph: Option<PathBuf>,
    /// Random regular graph on this many vertices for `ipg` (seeded by `--seed`).
    #[arg(long)]
    pub regular: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub degree: usize,
    /// Output file (stdout if absent).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Also write the family's decomposition order, for `solve --order given:<file>`.
    #[arg(long)]
    pub order_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub formula: PathBuf,
    /// `pathwidth`, `prefix` or `given:<file>`.
    #[arg(long, default_value = "pathwidth")]
    pub order: String,
    /// Write the proof trace here.
    #[arg(long)]
    pub proof: Option<PathBuf>,
    /// Write the statistics report (JSON) here.
    #[arg(long)]
    pub stats: Option<PathBuf>,
    /// Exit with code 3 unless the formula has this value.
    #[arg(long)]
    pub expect: Option<bool>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub formula: PathBuf,
    pub trace: PathBuf,
    /// Reject traces that do not end in the 0-sink.
    #[arg(long)]
    pub require_refutation: bool,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    pub formula: PathBuf,
    pub trace: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub formula: PathBuf,
    pub strategy: PathBuf,
    /// Enumerate exhaustively up to this many existential variables.
    #[arg(long, default_value_t = qobdd_core::strategy::DEFAULT_EXHAUSTIVE_LIMIT)]
    pub limit: usize,
    /// Samples drawn beyond the limit.
    #[arg(long, default_value_t = qobdd_core::strategy::DEFAULT_SAMPLES)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// `quparity` or `eqprime`.
    pub family: String,
    #[arg(long, default_value_t = 2)]
    pub from: usize,
    #[arg(long, default_value_t = 10)]
    pub to: usize,
    #[arg(long, default_value_t = 1)]
    pub step: usize,
    /// Comma-separated subset of `decomposition`, `pathwidth`, `prefix`.
    #[arg(long, default_value = "decomposition")]
    pub orders: String,
    /// Add a wall-time column.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
enum RectCommand {
    /// Largest monochromatic rectangle of `IP_G` against the induced-matching bound.
    Analyze(RectArgs),
}

#[derive(Debug, Args)]
pub struct RectArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// A file with the left and right vertex lists on two lines, `pairs`, or `random:<seed>`.
    #[arg(long, default_value = "pairs")]
    pub partition: String,
    /// Write the JSON report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { Failure::USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let g = &cli.global;
    let result = match cli.command {
        Command::Gen(a) => commands::gen(g, a),
        Command::Solve(a) => commands::solve(g, a),
        Command::Check(a) => commands::check(g, a),
        Command::Extract(a) => commands::extract(g, a),
        Command::Verify(a) => commands::verify(g, a),
        Command::Bench(a) => commands::bench(g, a),
        Command::Rect(RectCommand::Analyze(a)) => commands::rect_analyze(g, a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("qobdd: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
