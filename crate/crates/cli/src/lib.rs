//! Command-line front end: argument parsing, graph loading, and JSON / TSV
//! rendering of every analysis.

mod commands;
pub mod json;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "udense", version, about = "Most probable and nucleus densest subgraphs of uncertain graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Top-k most probable densest subgraphs by world sampling.
    Mpds(MpdsArgs),
    /// Top-k nucleus densest subgraphs by world sampling.
    Nds(NdsArgs),
    /// Exact probabilities by exhaustive world enumeration (small graphs).
    Oracle(OracleArgs),
    /// Expected densest subgraph baseline.
    Eds(EdsArgs),
    /// Cohesion and agreement metrics for a node set or two rankings.
    Metrics(MetricsArgs),
    /// θ-doubling convergence ladder, emitted as TSV.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Edge list "u v p", or "u v count" with --prob-model.
    #[arg(long)]
    pub graph: PathBuf,
    /// `given`, `exp:<mean>` (exponential cdf of counts), or `reciprocal-degree`.
    #[arg(long, default_value = "given")]
    pub prob_model: String,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// `edge`, `clique:<h>`, or `pattern:<name|file>`.
    #[arg(long, default_value = "edge")]
    pub density: String,
    /// Worker threads for sampling; results do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SamplingArgs {
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value_t = 1000)]
    pub theta: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Use the motif-core heuristic instead of exact per-world enumeration.
    #[arg(long)]
    pub heuristic: bool,
    /// Double θ from 10 until the top-k stops changing (overrides --theta).
    #[arg(long)]
    pub auto_theta: bool,
    /// Add accuracy guarantees computed from exact enumeration.
    #[arg(long)]
    pub bounds: bool,
}

#[derive(Debug, Args)]
pub struct MpdsArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub sampling: SamplingArgs,
}

#[derive(Debug, Args)]
pub struct NdsArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    /// Minimum size of a reported nucleus.
    #[arg(long, default_value_t = 2)]
    pub l_m: usize,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Rank by containment probability, keeping sets of at least this size.
    #[arg(long)]
    pub l_m: Option<usize>,
    /// Comma-separated node labels; report τ and γ of this set only.
    #[arg(long)]
    pub set: Option<String>,
    /// Check the matching-count identity on the graph's skeleton.
    #[arg(long)]
    pub matching: bool,
}

#[derive(Debug, Args)]
pub struct EdsArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub run: RunArgs,
    /// Comma-separated node labels.
    #[arg(long)]
    pub set: Option<String>,
    /// "node community" file; adds purity of --set.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// Result JSON of the method under test; with --exact adds rank F1.
    #[arg(long, requires = "exact")]
    pub ours: Option<PathBuf>,
    /// Reference result JSON.
    #[arg(long, requires = "ours")]
    pub exact: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Generator {
    Er,
    Ba,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Benchmark this graph instead of a synthetic one.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long, default_value = "given")]
    pub prob_model: String,
    #[arg(long, value_enum, default_value_t = Generator::Er)]
    pub generator: Generator,
    #[arg(long, default_value_t = 10)]
    pub nodes: usize,
    /// Erdős–Rényi pair probability.
    #[arg(long, default_value_t = 0.3)]
    pub edge_density: f64,
    /// Barabási–Albert edges per new node.
    #[arg(long, default_value_t = 2)]
    pub attach: usize,
    /// Edge probabilities are uniform in [min_prob, 1].
    #[arg(long, default_value_t = 0.1)]
    pub min_prob: f64,
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    /// Benchmark the NDS estimator with this minimum size instead of MPDS.
    #[arg(long)]
    pub l_m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub heuristic: bool,
}

/// Why a command did not produce output.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or inputs (exit code 2).
    Usage(String),
    /// The analysis itself failed (exit code 1).
    Compute(anyhow::Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Compute(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(msg) => write!(f, "usage error: {msg}"),
            Failure::Compute(err) => {
                // Skip causes whose text the previous message already embeds.
                let mut shown = err.to_string();
                write!(f, "error: {shown}")?;
                for cause in err.chain().skip(1) {
                    let text = cause.to_string();
                    if !shown.contains(&text) {
                        write!(f, ": {text}")?;
                    }
                    shown = text;
                }
                Ok(())
            }
        }
    }
}

impl From<udense::Error> for Failure {
    fn from(err: udense::Error) -> Self {
        use udense::Error as E;
        match err {
            E::InvalidArgument(_) | E::UnknownNotion(_) | E::UnknownSolver(_) | E::EmptySet => {
                Failure::Usage(err.to_string())
            }
            other => Failure::Compute(other.into()),
        }
    }
}

/// Text produced by a command and where it should go.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rendered {
    pub text: String,
    pub out: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command without
/// touching stdout.
pub fn execute<I, T>(args: I) -> Result<Rendered, Failure>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Failure::Usage(e.to_string()))?;
    commands::dispatch(cli.command)
}

/// Entry point: runs the command, writes its output, and returns the exit
/// code (0 success, 1 computation error, 2 usage error).
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::new().filter("UDENSE_LOG")).try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match commands::dispatch(cli.command) {
        Ok(Rendered { text, out: Some(path) }) => match std::fs::write(&path, text) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", path.display());
                1
            }
        },
        Ok(Rendered { text, out: None }) => {
            print!("{text}");
            0
        }
        Err(failure) => {
            eprintln!("{failure}");
            failure.exit_code()
        }
    }
}
