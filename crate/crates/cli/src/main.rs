use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;

/// Exact effects, influences and pivotality of players.
#[derive(Parser)]
#[command(name = "pivotal", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a named distribution as JSON.
    Gen(GenArgs),
    /// Report effects, influences, pivotality or counts.
    Analyze(AnalyzeArgs),
    /// Check a bound or identity on one instance and print a verdict.
    Verify(VerifyArgs),
    /// Build a certified counterexample.
    Counterexample(CounterexampleArgs),
    /// Tabulate pivotal counts for majority with abstention.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    HadamardMu,
    ComplementMu,
    MixtureD,
    UniformProduct,
    Majp,
}

#[derive(Args)]
struct GenArgs {
    kind: GenKind,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Participation probability for `majp`, as "num/den".
    #[arg(long)]
    p: Option<String>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Effects,
    Influences,
    Pivotal,
    Counts,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Distribution JSON file.
    #[arg(long)]
    dist: PathBuf,
    /// Function JSON file, or a builtin such as `majp:9`, `dictator:5:0`.
    #[arg(long = "fn")]
    function: String,
    #[arg(long, value_enum)]
    what: What,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Thm1,
    Thm2,
    Warmup,
    SumBound,
    BinaryBound,
    Reduction,
    Convex,
    EffectIdentity,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    which: Which,
    #[arg(long)]
    dist: PathBuf,
    /// Second distribution, for `convex`.
    #[arg(long)]
    dist2: Option<PathBuf>,
    #[arg(long = "fn")]
    function: String,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    /// Maximum set size, for `thm2`.
    #[arg(long)]
    m: Option<usize>,
    /// Mixture weight of the first distribution, for `convex`.
    #[arg(long)]
    q: Option<String>,
    /// Player index, for `convex`.
    #[arg(long)]
    player: Option<usize>,
    /// Comma-separated player indices, for `sum-bound`.
    #[arg(long, value_delimiter = ',')]
    players: Vec<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CeKind {
    Effect,
    Influence,
}

#[derive(Args)]
struct CounterexampleArgs {
    #[arg(long, value_enum)]
    which: CeKind,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    out_fn: Option<PathBuf>,
    #[arg(long)]
    out_dist: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, required = true)]
    majp_tightness: bool,
    #[arg(long)]
    n: usize,
    /// Participation probability.
    #[arg(long)]
    p: String,
    /// Pivotality threshold; half the participation probability by default.
    #[arg(long)]
    pivot_p: Option<String>,
    /// Comma-separated thresholds; `derived` is half the smallest deviation
    /// at a participating symbol (exact mode only).
    #[arg(long, value_delimiter = ',', required = true)]
    alpha_grid: Vec<String>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

fn init_threads() {
    if let Some(n) = std::env::var("PIVOTAL_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            // only fails if a pool already exists
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();
    let result = match cli.command {
        Command::Gen(a) => commands::gen(a),
        Command::Analyze(a) => commands::analyze(a),
        Command::Verify(a) => commands::verify(a),
        Command::Counterexample(a) => commands::counterexample(a),
        Command::Sweep(a) => commands::sweep(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
