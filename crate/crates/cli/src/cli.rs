//! Argument surface of the `tdprof` binary.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use tdprof_core::{Normalization, DEFAULT_COMBINATION_CAP, DEFAULT_ITEMSET_CAP};

#[derive(Debug, Parser)]
#[command(
    name = "tdprof",
    version,
    about = "Characterize transactional databases for itemset-mining benchmarks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the metric table of one or more databases
    Profile(ProfileArgs),
    /// Record per-level sweep curves of one or more databases
    Sweep(SweepArgs),
    /// Cluster a metric table and explain the clusters with a decision tree
    Cluster(ClusterArgs),
    /// Enumerate minimum representative benchmarks of a clustering
    Mrb(MrbArgs),
    /// Audit benchmark files against a clustering
    CheckBenchmark(CheckBenchmarkArgs),
}

/// Knobs shared by every command that mines databases.
#[derive(Debug, Args)]
pub struct SweepOpts {
    /// Explicit support levels in percent, e.g. 10,20,30
    #[arg(long, value_delimiter = ',', conflicts_with = "range")]
    pub levels: Option<Vec<f64>>,

    /// Arithmetic support schedule START:STEP in percent, capped at the
    /// maximum singleton support of each database
    #[arg(long)]
    pub range: Option<String>,

    /// Also compute negative-border curves
    #[arg(long)]
    pub include_negative: bool,

    /// Cardinality-curve normalization
    #[arg(long, value_enum, default_value_t = NormMode::PercentOfMax)]
    pub norm: NormMode,

    /// Cap on mined itemsets per database
    #[arg(long, default_value_t = DEFAULT_ITEMSET_CAP)]
    pub max_itemsets: u64,

    /// Budget for pair expansion in the second-order entropy
    #[arg(long, default_value_t = DEFAULT_COMBINATION_CAP)]
    pub pair_cap: u64,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    /// Transaction files, or directories scanned non-recursively
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,

    #[command(flatten)]
    pub sweep_opts: SweepOpts,

    /// Output directory
    #[arg(long, default_value = "tdprof-out")]
    pub out: PathBuf,

    /// Metric table format
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub format: TableFormat,

    /// Worker threads (defaults to all cores)
    #[arg(long)]
    pub workers: Option<usize>,

    /// Seed recorded in the report
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Transaction files, or directories scanned non-recursively
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,

    #[command(flatten)]
    pub sweep_opts: SweepOpts,

    /// Dump the frequent itemsets of every level to <OUT>/itemsets/
    #[arg(long)]
    pub dump_itemsets: bool,

    /// Output directory
    #[arg(long, default_value = "tdprof-out")]
    pub out: PathBuf,

    /// Curve table format
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub format: TableFormat,

    /// Worker threads (defaults to all cores)
    #[arg(long)]
    pub workers: Option<usize>,

    /// Seed recorded in the report
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    /// Metric table: CSV from `profile`, or its JSON form
    pub table: PathBuf,

    /// Number of clusters
    #[arg(long, default_value_t = 4)]
    pub k: usize,

    /// Independent restarts of the clustering
    #[arg(long, default_value_t = 500)]
    pub restarts: usize,

    /// Master seed of the clustering
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Include the transaction count as a clustering feature
    #[arg(long)]
    pub include_ds: bool,

    /// Drop the second-order entropy column instead of imputing its
    /// missing cells
    #[arg(long)]
    pub drop_h2: bool,

    /// Drop further named metric columns from the feature set, e.g.
    /// `--drop as,mts` to exclude the heavy-tailed size columns
    #[arg(long, value_delimiter = ',')]
    pub drop: Vec<String>,

    /// Maximum split depth of the explaining tree (default: grow until pure)
    #[arg(long)]
    pub max_depth: Option<usize>,

    /// Output directory
    #[arg(long, default_value = "tdprof-out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct MrbArgs {
    /// Clustering report (clusters.json)
    pub clusters: PathBuf,

    /// Benchmark files to audit alongside
    pub studies: Vec<PathBuf>,

    /// Maximum example benchmarks listed in the report
    #[arg(long, default_value_t = 20)]
    pub limit: usize,

    /// Output directory
    #[arg(long, default_value = "tdprof-out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CheckBenchmarkArgs {
    /// Clustering report (clusters.json)
    pub clusters: PathBuf,

    /// Benchmark files to audit
    #[arg(required = true)]
    pub studies: Vec<PathBuf>,

    /// Output directory
    #[arg(long, default_value = "tdprof-out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormMode {
    #[value(name = "percent-of-max")]
    PercentOfMax,
    Raw,
}

impl NormMode {
    pub fn to_core(self) -> Normalization {
        match self {
            NormMode::PercentOfMax => Normalization::PercentOfMax,
            NormMode::Raw => Normalization::Raw,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NormMode::PercentOfMax => "percent-of-max",
            NormMode::Raw => "raw",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}
