//! Command-line driver: argument parsing, human-readable output and
//! line-delimited JSON reports.
//!
//! Exit status is 0 on success, 1 when an instance is infeasible, undecided
//! or fails verification, and 2 for usage errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
pub mod gen;
pub mod record;
pub mod sweep;

pub use record::{verify_artifact, Artifact, GroundKind, Outcome, Record};
pub use sweep::{fuzz_records, FuzzKind, FuzzParams};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "zerosum",
    version,
    about = "Zero-sum partitions, irregular labelings and magic labelings over finite Abelian groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Partition Γ - {0} (or Γ) into zero-sum parts of the given sizes.
    Partition(PartitionArgs),
    /// Find an irregular arc labeling of a digraph.
    Realize(RealizeArgs),
    /// Find a distance magic labeling of a complete multipartite graph.
    Magic(MagicArgs),
    /// Build a zero-sum partition from pairs and triples.
    Asympartition(AsymArgs),
    /// Check every size sequence with parts of size at least 3 on all small groups.
    Conjecture(ConjectureArgs),
    /// Run a seeded randomized harness.
    Fuzz(FuzzArgs),
    /// Re-verify every artifact in a report file.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Write line-delimited JSON records here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Node limit for exact searches.
    #[arg(long, value_name = "N")]
    budget_nodes: Option<u64>,
}

#[derive(Debug, Args)]
struct PartitionArgs {
    #[arg(long)]
    group: String,
    #[arg(long)]
    sizes: String,
    #[arg(long, value_enum, default_value_t = GroundArg::Nonzero)]
    ground: GroundArg,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GroundArg {
    Nonzero,
    All,
}

#[derive(Debug, Args)]
struct RealizeArgs {
    #[arg(long)]
    group: String,
    /// Digraph file: `n m`, then `m` lines `tail head`.
    #[arg(long)]
    digraph: PathBuf,
    #[arg(long, default_value = "auto", value_parser = ["auto", "partition", "induction", "search"])]
    method: String,
    /// Randomizes the induction's choices.
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct MagicArgs {
    #[arg(long)]
    group: String,
    /// Class sizes, comma separated.
    #[arg(long)]
    parts: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct AsymArgs {
    #[arg(long)]
    group: String,
    #[arg(long)]
    sizes: String,
    #[arg(long, default_value_t = 0.25)]
    epsilon: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    retries: u32,
    /// Fall back to exact search if the construction fails.
    #[arg(long)]
    fallback: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct ConjectureArgs {
    #[arg(long)]
    max_order: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct FuzzArgs {
    #[arg(value_enum)]
    kind: FuzzKind,
    #[arg(long, default_value_t = 200)]
    cases: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    min_vertices: usize,
    #[arg(long, default_value_t = 12)]
    max_vertices: usize,
    /// Largest group drawn by the induction harness.
    #[arg(long, default_value_t = 64)]
    max_order: u64,
    /// Groups for the round-trip and asymptotic harnesses (repeatable).
    #[arg(long)]
    group: Vec<String>,
    #[arg(long, default_value_t = 8)]
    retries: u32,
    #[arg(long)]
    fallback: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// A report written with `--out`.
    input: PathBuf,
}

/// Exit status of a finished command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    Negative = 1,
    Usage = 2,
}

#[derive(Debug)]
pub(crate) enum CliError {
    Usage(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

pub(crate) struct Finished {
    pub records: Vec<Record>,
    pub status: Status,
}

/// Parses `argv` (program name first), runs the command and returns the
/// exit status. Human-readable output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                Status::Usage as i32
            } else {
                let _ = write!(out, "{text}");
                Status::Success as i32
            };
        }
    };
    let (result, report) = match cli.command {
        Command::Partition(a) => {
            let ground = match a.ground {
                GroundArg::Nonzero => GroundKind::NonZero,
                GroundArg::All => GroundKind::All,
            };
            let r = commands::partition(out, &a.group, &a.sizes, ground, &a.common);
            (r, a.common.out)
        }
        Command::Realize(a) => {
            let r = commands::realize(out, &a.group, &a.digraph, &a.method, a.seed, &a.common);
            (r, a.common.out)
        }
        Command::Magic(a) => (
            commands::magic(out, &a.group, &a.parts, &a.common),
            a.common.out,
        ),
        Command::Asympartition(a) => {
            let r = commands::asympartition(
                out, &a.group, &a.sizes, a.epsilon, a.seed, a.retries, a.fallback, &a.common,
            );
            (r, a.common.out)
        }
        Command::Conjecture(a) => (
            commands::conjecture(out, a.max_order, &a.common),
            a.common.out,
        ),
        Command::Fuzz(a) => {
            let params = FuzzParams {
                kind: a.kind,
                cases: a.cases,
                seed: a.seed,
                vertices: (a.min_vertices, a.max_vertices),
                max_order: a.max_order,
                groups: a.group.clone(),
                retries: a.retries,
                fallback: a.fallback,
                budget_nodes: a.common.budget_nodes,
            };
            (commands::fuzz(out, &params), a.common.out)
        }
        Command::Verify(a) => (commands::verify(out, &a.input), None),
    };
    match result {
        Ok(done) => {
            if let Some(path) = report {
                if let Err(e) = write_report(&path, &done.records) {
                    let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                    return Status::Negative as i32;
                }
            }
            done.status as i32
        }
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            Status::Usage as i32
        }
        Err(CliError::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            Status::Negative as i32
        }
    }
}

fn write_report(path: &std::path::Path, records: &[Record]) -> std::io::Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}
