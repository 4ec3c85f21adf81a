//! `entloc`: command-line experiments for entanglement localization.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.

mod args;
mod commands;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::args::{parse_mask, EnsembleArg, NumList};
use crate::output::{Format, RunManifest};

#[derive(Debug, Parser)]
#[command(name = "entloc", version, about = "Entanglement localization experiments")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,

    /// Write results here instead of stdout; a run manifest is written to
    /// `<OUT>.manifest.json`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads (default: available cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// n-tangle of a state: ghz:<n>, w:<n>, graph6:<string> or file:<path>.
    ///
    /// A state file holds the qubit count on its first line, then 2^n lines
    /// "re im" in basis-index order (qubit i is bit i of the index).
    Tangle { state: String },

    /// Decide EA ∈ {0, 1} for a graph state by solving Γ_BA x = D over GF(2).
    ///
    /// Bit k of --a-mask puts vertex k (0-indexed, graph6 order) in A. A
    /// figure vertex numbered j from 1 corresponds to bit j − 1.
    TestGraph {
        graph6: String,
        #[arg(long, value_parser = parse_mask)]
        a_mask: u64,
    },

    /// Monte Carlo estimate of p_s next to its large-dimension approximation and bounds.
    Ps(PsArgs),

    /// EA (and optionally LE) statistics over Haar-random states.
    HaarScan(HaarScanArgs),

    /// Exhaustive census of GHZ-extraction configurations on linear clusters.
    Cluster {
        /// Path lengths, e.g. `2..16` or `8,10,12`.
        #[arg(long, default_value = "2..16")]
        n_range: NumList,
    },

    /// Run the oracle-equivalence and exact-expectation suites.
    Verify {
        /// Only the exact-expectation suite.
        #[arg(long, conflicts_with = "oracle")]
        exact_expectations: bool,
        /// Only the oracle-equivalence suite.
        #[arg(long)]
        oracle: bool,
        /// Largest vertex count of the oracle sweep.
        #[arg(long, default_value_t = 6)]
        max_n: usize,
    },
}

#[derive(Debug, clap::Args, Serialize)]
struct PsArgs {
    /// uniform, family:<path|cycle|complete|regular<k>> or iso.
    #[arg(long, default_value = "uniform")]
    ensemble: EnsembleArg,
    /// Vertex counts.
    #[arg(long)]
    n: NumList,
    /// Sizes of A. Combinations with n_a >= n or odd n − n_a are skipped
    /// when the list contains a range; otherwise they are errors. Not used
    /// with `--mode any`.
    #[arg(long)]
    na: Option<NumList>,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, env = "ENTLOC_SEED", default_value_t = 0)]
    seed: u64,
    /// Slack parameter r ∈ (0, 1) of the bounds.
    #[arg(long, default_value_t = 0.5)]
    r: f64,
    /// Graph list for `--ensemble iso`, one graph6 record per line.
    #[arg(long)]
    graph6_file: Option<PathBuf>,
    /// Skip disconnected graphs of the iso list.
    #[arg(long)]
    connected_only: bool,
    /// Bipartition draw for `--ensemble iso`: `fixed` uses |A| = n_a, `any`
    /// draws uniformly over all bipartitions with even |B| >= 2.
    #[arg(long, value_enum)]
    mode: Option<IsoMode>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum IsoMode {
    Fixed,
    Any,
}

#[derive(Debug, clap::Args, Serialize)]
struct HaarScanArgs {
    /// Sizes of A.
    #[arg(long, alias = "na")]
    na_range: NumList,
    /// Size of B (even).
    #[arg(long, default_value_t = 2)]
    nb: usize,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, env = "ENTLOC_SEED", default_value_t = 0)]
    seed: u64,
    /// Also optimise LE over product bases (slow).
    #[arg(long)]
    with_le: bool,
    #[arg(long, default_value_t = 10)]
    restarts: usize,
    #[arg(long, default_value_t = 2000)]
    max_evals: usize,
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Tangle { .. } => "tangle",
            Command::TestGraph { .. } => "test-graph",
            Command::Ps(_) => "ps",
            Command::HaarScan(_) => "haar-scan",
            Command::Cluster { .. } => "cluster",
            Command::Verify { .. } => "verify",
        }
    }

    fn seed(&self) -> Option<u64> {
        match self {
            Command::Ps(a) => Some(a.seed),
            Command::HaarScan(a) => Some(a.seed),
            _ => None,
        }
    }
}

/// Failures mapped to process exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) => m,
        }
    }
}

impl From<entloc::Error> for CliError {
    fn from(e: entloc::Error) -> Self {
        match e {
            entloc::Error::Input(_) => CliError::Io(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("entloc: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

/// Returns `Ok(false)` when a verification check failed.
fn run(cli: &Cli) -> Result<bool, CliError> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot build thread pool: {e}")))?;
    }
    let start = Instant::now();
    let report = commands::dispatch(&cli.command)?;
    let body = report.table.render(cli.format);
    match &cli.out {
        Some(path) => {
            let manifest = RunManifest {
                subcommand: cli.command.name().to_string(),
                parameters: serde_json::to_value(&cli.command).expect("parameters"),
                seed: cli.command.seed(),
                threads: cli.threads,
                format: cli.format,
                argv: std::env::args().collect(),
                tool_version: env!("CARGO_PKG_VERSION"),
                duration_seconds: start.elapsed().as_secs_f64(),
            };
            output::write_with_manifest(path, &body, &manifest)?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(format!("cannot write to stdout: {e}")))?;
        }
    }
    for msg in &report.failures {
        eprintln!("entloc: FAIL {msg}");
    }
    Ok(report.failures.is_empty())
}
