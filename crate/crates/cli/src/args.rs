use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dbal_core::scan::IntRange;

#[derive(Debug, Parser)]
#[command(name = "dbal", version, about = "Distance-balance checks for generalized Petersen graphs")]
#[command(args_override_self = true)]
pub struct Cli {
    /// Plain `key=value` file whose entries are applied as flags before the command line.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Log to stderr; repeat for more detail.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide ℓ-distance-balancedness for one graph.
    Check(CheckArgs),
    /// Sweep (n, k, ℓ) and compare BFS verdicts with predictions.
    Scan(ScanArgs),
    /// Print |W_xy|, |W_yx| and the tie set for one pair.
    Partition(PartitionArgs),
    /// Print the known-result prediction for (n, k, ℓ).
    Predict(PredictArgs),
    /// Write GP(n,k) as an edge list.
    Export(ExportArgs),
    /// Verdicts for every ℓ below the diameter, against the conjectured threshold.
    Probe(ProbeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    #[value(alias = "jsonl")]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EllArg {
    List(Vec<u32>),
    All,
}

pub fn parse_ells(s: &str) -> Result<EllArg, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(EllArg::All);
    }
    let mut ells = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once("..") {
            Some(_) => {
                let range: IntRange = part.parse().map_err(|e| format!("{e}"))?;
                ells.extend(range.iter().map(|v| v as u32));
            }
            None => ells.push(part.parse().map_err(|_| format!("bad ell value {part:?}"))?),
        }
    }
    if ells.is_empty() || ells.contains(&0) {
        return Err("ell values must be positive".into());
    }
    Ok(EllArg::List(ells))
}

fn parse_range(s: &str) -> Result<IntRange, String> {
    s.parse().map_err(|e| format!("{e}"))
}

#[derive(Debug, Args)]
pub struct GpArgs {
    /// Ring length n.
    #[arg(short = 'n', long = "n")]
    pub n: usize,
    /// Inner step k, with 1 <= k < n/2.
    #[arg(short = 'k', long = "k")]
    pub k: usize,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Ring length n.
    #[arg(short = 'n', long = "n", required_unless_present = "edges", conflicts_with = "edges")]
    pub n: Option<usize>,
    /// Inner step k, with 1 <= k < n/2.
    #[arg(short = 'k', long = "k", required_unless_present = "edges", conflicts_with = "edges")]
    pub k: Option<usize>,
    /// Read the graph from an edge-list file instead of building GP(n,k).
    #[arg(long, value_name = "FILE")]
    pub edges: Option<PathBuf>,
    /// Comma-separated ℓ values or ranges, or `all`.
    #[arg(short = 'l', long = "l", default_value = "1", value_parser = parse_ells)]
    pub ells: EllArg,
    /// Check every pair instead of rotation representatives.
    #[arg(long)]
    pub no_symmetry: bool,
    #[arg(long, value_enum, default_value = "human")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OffsetFrom {
    /// k(k+2)
    Balanced,
    /// The conjectured threshold n_k.
    Nk,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Range of k, e.g. `3..8` (inclusive).
    #[arg(short = 'k', long = "k", value_parser = parse_range)]
    pub k: IntRange,
    /// Range of n; invalid (n, k) combinations are skipped.
    #[arg(short = 'n', long = "n", value_parser = parse_range, required_unless_present = "n_offset", conflicts_with = "n_offset")]
    pub n: Option<IntRange>,
    /// n relative to a per-k base, see --offset-from.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub n_offset: Option<IntRange>,
    #[arg(long, value_enum, default_value = "balanced", requires = "n_offset")]
    pub offset_from: OffsetFrom,
    /// Comma-separated ℓ values or ranges, or `all` (1 to each diameter).
    #[arg(short = 'l', long = "l", default_value = "1", value_parser = parse_ells)]
    pub ells: EllArg,
    /// Check every pair instead of rotation representatives.
    #[arg(long)]
    pub no_symmetry: bool,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, env = "DBAL_WORKERS", value_parser = clap::value_parser!(u32).range(1..))]
    pub workers: Option<u32>,
    /// Per-record time budget in milliseconds.
    #[arg(long, value_name = "MS")]
    pub timeout_ms: Option<u64>,
    /// Record wall-clock time per record (reports are then not reproducible).
    #[arg(long)]
    pub timing: bool,
    /// Skip the closed-form bound checks.
    #[arg(long)]
    pub no_bounds: bool,
    /// `json` writes one record per line.
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write records here instead of stdout.
    #[arg(short = 'o', long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    #[command(flatten)]
    pub gp: GpArgs,
    /// First vertex, e.g. `u0` or `v-3`.
    #[arg(allow_hyphen_values = true)]
    pub x: String,
    /// Second vertex.
    #[arg(allow_hyphen_values = true)]
    pub y: String,
    /// Also list the three vertex sets.
    #[arg(long)]
    pub sets: bool,
    #[arg(long, value_enum, default_value = "human")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[command(flatten)]
    pub gp: GpArgs,
    #[arg(short = 'l', long = "l", default_value = "1")]
    pub ell: u32,
    #[arg(long, value_enum, default_value = "human")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub gp: GpArgs,
    /// Output file; stdout when omitted.
    #[arg(conflicts_with = "output")]
    pub path: Option<PathBuf>,
    #[arg(short = 'o', long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub gp: GpArgs,
    #[arg(long, value_enum, default_value = "human")]
    pub format: Format,
}
