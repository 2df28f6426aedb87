//! `kdsp` command-line front end. Every command prints one JSON report on
//! standard output; see `report.rs` for the envelope and exit codes.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use kdsp::diversity::MeasureKind;
use kdsp::disjoint::{CostBase, CostMode, Variant};

#[derive(Parser, Debug)]
#[command(name = "kdsp", version, about = "Partially disjoint k shortest paths")]
pub struct Cli {
    /// Add wall-clock timing to the report. Reports are byte-identical
    /// across runs only without it.
    #[arg(long, global = true)]
    pub timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a graph file for structural violations.
    Validate { graph: PathBuf },
    /// The first k near-shortest s-t paths in order.
    Ksp {
        #[command(flatten)]
        query: Query,
        #[arg(short, default_value_t = 10)]
        k: usize,
    },
    /// Best pairs and the first-two / first-three guarantees over a prefix.
    Diverse {
        #[command(flatten)]
        query: Query,
        #[arg(long, default_value_t = 3)]
        prefix: usize,
        #[arg(long, value_enum, default_value_t = MeasureArg::All)]
        measure: MeasureArg,
    },
    /// Subgraph of all shortest s-t paths.
    Spdag {
        #[command(flatten)]
        query: Query,
        /// Also write the DAG in graph-file form.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Shortest paths with bounded or penalized sharing of sensitive members.
    Disjoint(DisjointArgs),
    /// Generate an instance file.
    Gen(GenArgs),
    /// Brute-force reference answers for small graphs.
    Oracle {
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(subcommand)]
        what: OracleCommand,
    },
    /// Run the guarantee checks over every `.graph` file in a directory.
    Claims {
        dir: PathBuf,
        #[arg(long, default_value_t = 3)]
        prefix: usize,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Query {
    pub graph: PathBuf,
    /// Source node, 1-based. Defaults to the file's `c terminals` line, else 1.
    #[arg(short = 's', long = "source")]
    pub s: Option<usize>,
    /// Target node, 1-based. Defaults to the file's `c terminals` line, else n.
    #[arg(short = 't', long = "target")]
    pub t: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct DisjointArgs {
    #[command(flatten)]
    pub query: Query,
    #[arg(long, value_enum)]
    pub variant: VariantArg,
    /// Sensitive set file (`e u v` or `n u` lines).
    #[arg(long)]
    pub sensitive: Option<PathBuf>,
    /// Number of paths; required for n3 and n4.
    #[arg(short)]
    pub r: Option<u64>,
    #[arg(long, value_enum, default_value_t = CostBaseArg::Strict)]
    pub cost_base: CostBaseArg,
    #[arg(long, value_enum, default_value_t = CostModeArg::Bigint)]
    pub cost_mode: CostModeArg,
}

#[derive(Args, Debug, Clone)]
pub struct BudgetArgs {
    #[arg(long, default_value_t = 14)]
    pub max_nodes: usize,
    #[arg(long, default_value_t = 20_000)]
    pub max_paths: usize,
    #[arg(long, default_value_t = 2_000_000)]
    pub max_subsets: usize,
}

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    /// All simple s-t paths in order, or the first k.
    Ksp {
        #[command(flatten)]
        query: Query,
        #[arg(short)]
        k: Option<usize>,
    },
    /// All shortest s-t paths.
    Spdag {
        #[command(flatten)]
        query: Query,
    },
    /// Exhaustive optimum of a disjointness variant.
    Disjoint(DisjointArgs),
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub family_pos: Option<Family>,
    #[arg(long = "family", value_enum)]
    pub family_flag: Option<Family>,
    /// Output graph file.
    #[arg(short, long)]
    pub output: PathBuf,
    /// Towers (example1a) or clique size q̄ (example2, example2-boundary).
    #[arg(long, alias = "towers")]
    pub q_bar: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub tower_width: usize,
    /// Diamonds (example1b, or the example2 diamond insert).
    #[arg(long)]
    pub n_prime: Option<usize>,
    /// Base graph for example2.
    #[arg(long)]
    pub base: Option<PathBuf>,
    /// Inner node of the base's shortest path to split, 1-based.
    #[arg(long)]
    pub split_node: Option<usize>,
    #[arg(short = 's', long = "source")]
    pub s: Option<usize>,
    #[arg(short = 't', long = "target")]
    pub t: Option<usize>,
    #[arg(long, value_enum, default_value_t = InsertArg::Complete)]
    pub insert: InsertArg,
    #[arg(long, default_value_t = 10)]
    pub nodes: usize,
    #[arg(long, default_value_t = 0.4)]
    pub density: f64,
    #[arg(long, default_value_t = 1)]
    pub weight_min: u64,
    #[arg(long, default_value_t = 10)]
    pub weight_max: u64,
    #[arg(long)]
    pub directed: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Example1a,
    Example1b,
    Example2,
    Example2Boundary,
    Random,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum InsertArg {
    Complete,
    Towers,
    Diamonds,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasureArg {
    All,
    EdgeSymmetricDifference,
    NodeSymmetricDifference,
    EdgeSetDifference,
    NodeSetDifference,
}

impl MeasureArg {
    pub fn kinds(self) -> Vec<MeasureKind> {
        match self {
            MeasureArg::All => MeasureKind::ALL.to_vec(),
            MeasureArg::EdgeSymmetricDifference => vec![MeasureKind::EdgeSymmetricDifference],
            MeasureArg::NodeSymmetricDifference => vec![MeasureKind::NodeSymmetricDifference],
            MeasureArg::EdgeSetDifference => vec![MeasureKind::EdgeSetDifference],
            MeasureArg::NodeSetDifference => vec![MeasureKind::NodeSetDifference],
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum VariantArg {
    N1,
    N2,
    N3,
    N4,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::N1 => Variant::N1,
            VariantArg::N2 => Variant::N2,
            VariantArg::N3 => Variant::N3,
            VariantArg::N4 => Variant::N4,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CostBaseArg {
    Strict,
    Size,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CostModeArg {
    Bigint,
    Lex,
}

impl From<CostBaseArg> for CostBase {
    fn from(v: CostBaseArg) -> Self {
        match v {
            CostBaseArg::Strict => CostBase::Strict,
            CostBaseArg::Size => CostBase::Size,
        }
    }
}

impl From<CostModeArg> for CostMode {
    fn from(v: CostModeArg) -> Self {
        match v {
            CostModeArg::Bigint => CostMode::BigInt,
            CostModeArg::Lex => CostMode::Lex,
        }
    }
}

/// Writes the report; a closed stdout (e.g. piped into `head`) is not an error.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            let report = report::Report::new(argv);
            emit(&report.failure(&report::Failure::usage(e.kind().to_string())));
            return ExitCode::from(report::EXIT_USAGE);
        }
    };
    let mut report = report::Report::new(argv);
    let started = std::time::Instant::now();
    let outcome = commands::run(&cli.command, &mut report);
    if cli.timing {
        report.set_elapsed(started.elapsed());
    }
    match outcome {
        Ok(results) => {
            emit(&report.success(results));
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            emit(&report.failure(&failure));
            ExitCode::from(failure.exit_code)
        }
    }
}
