use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod bench;
mod commands;

#[derive(Parser)]
#[command(name = "polytree", version, about = "Score-based polytree learning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact or exhaustive solve of a score file.
    Solve(SolveArgs),
    /// Greedy approximation with a certified ratio.
    Approx(ApproxArgs),
    /// Turn a set family or graph into a score file.
    Reduce(ReduceArgs),
    /// Write a seeded random (or adversarial) score file.
    Gen(GenArgs),
    /// Paired exact/approximate runs over a seeded suite, as CSV.
    Bench(BenchArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Score file.
    #[arg(long)]
    scores: PathBuf,
    /// Drop parent sets larger than K.
    #[arg(long, value_name = "K")]
    max_indegree: Option<usize>,
    /// Allow at most Q arcs per skeleton component.
    #[arg(long, value_name = "Q")]
    max_component_arcs: Option<usize>,
    /// Use the scores as given instead of shifting every f_v(∅) to 0.
    #[arg(long)]
    no_normalize: bool,
}

#[derive(Args)]
struct OutputArgs {
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report runtime_ms as 0 so that repeated runs are byte-identical.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExactAlgo {
    Dp,
    DpPruned,
    Brute,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "dp")]
    algo: ExactAlgo,
    /// Headroom of the pruning bound.
    #[arg(long, default_value_t = polytree_core::exactdp::DEFAULT_SLACK)]
    slack: usize,
    /// Only polytrees whose skeleton is a single tree (brute only).
    #[arg(long)]
    connected: bool,
    /// Lift the exact solvers' node cap.
    #[arg(long)]
    force: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum ApproxAlgo {
    Greedy,
    Additive,
    Density,
    GreedyComp,
}

#[derive(Args)]
struct ApproxArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum)]
    algo: ApproxAlgo,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReductionName {
    Setpart,
    Indset,
    IndsetComp,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(value_enum)]
    kind: ReductionName,
    /// Set-family file (setpart) or graph file (indset, indset-comp).
    #[arg(long = "in")]
    input: PathBuf,
    /// 1/ε for the set-partition construction.
    #[arg(long, default_value_t = 1)]
    epsilon_inv: usize,
    /// Score file destination; the certificate goes to `<out>.cert.json`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Certificate destination, overriding the default sidecar path.
    #[arg(long)]
    cert: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 6)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    max_parent_size: usize,
    #[arg(long, default_value_t = 3)]
    sets_per_node: usize,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    score_low: i64,
    #[arg(long, default_value_t = 10, allow_negative_numbers = true)]
    score_high: i64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Singleton scores only, unions filled in additively.
    #[arg(long)]
    additive: bool,
    /// Emit the hub-and-chain instance with K chain nodes instead.
    #[arg(long, value_name = "K", conflicts_with = "additive")]
    hub: Option<usize>,
    #[arg(long, default_value_t = 10.0)]
    hub_score: f64,
    #[arg(long, default_value_t = 9.0)]
    ring_score: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteName {
    /// n in [3, 7]: full DP, pruned DP, greedy.
    Small,
    /// n in [8, 12]: full DP, pruned DP, greedy.
    Medium,
    /// Additive n in [3, 7], k in {1, 2}: brute force, additive greedy.
    Additive,
    /// n in [3, 7], q in {2, 3}: brute force, density greedy, raw greedy.
    Comp,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    suite: SuiteName,
    #[arg(long, default_value_t = 20)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

/// Failure classes with stable exit codes.
#[derive(Debug)]
enum CliError {
    /// Bad input, unreadable file, unmet precondition: exit 1.
    Input(String),
    /// A size guard or unsupported combination: exit 2.
    Refused(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Refused(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) | CliError::Refused(m) => f.write_str(m),
        }
    }
}

impl From<polytree_core::SolveError> for CliError {
    fn from(e: polytree_core::SolveError) -> Self {
        match e {
            polytree_core::SolveError::Refused(_) => CliError::Refused(e.to_string()),
            polytree_core::SolveError::Precondition(_) => CliError::Input(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(args) => commands::solve(&args),
        Command::Approx(args) => commands::approx(&args),
        Command::Reduce(args) => commands::reduce(&args),
        Command::Gen(args) => commands::gen(&args),
        Command::Bench(args) => bench::run(&args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
