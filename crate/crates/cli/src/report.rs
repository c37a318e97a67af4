//! Artifact documents and their CSV/JSON encodings.
//!
//! Every artifact records the seed it was produced under and a schema
//! version. Writers are deterministic: equal inputs give byte-identical
//! files. CSV files start with `#`-prefixed provenance comments which the
//! table reader skips; numbers use `.` as the decimal separator and two
//! fractional digits.

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::fs;
use std::io::Write;
use std::path::Path;
use tdprof_core::SweepLevel;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricsReport {
    pub schema_version: u32,
    pub command: String,
    pub seed: u64,
    pub normalization: String,
    pub include_negative: bool,
    pub rows: Vec<MetricsRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricsRow {
    pub id: u32,
    pub dataset: String,
    pub ds: u64,
    #[serde(rename = "as")]
    pub alphabet_size: u64,
    pub ats: f64,
    pub mts: u64,
    pub f1: f64,
    pub ggd: Option<f64>,
    pub h1: Option<f64>,
    pub h2: Option<f64>,
    pub mss: f64,
    /// Support schedule the sweep metrics were computed over; absent when
    /// no valid schedule existed for the database.
    pub levels: Option<Vec<f64>>,
    pub mcd: Option<f64>,
    pub asd: Option<f64>,
    pub fal: Option<f64>,
    pub pbc: Option<f64>,
    pub pbl: Option<f64>,
    pub nbc: Option<f64>,
    pub nbl: Option<f64>,
    /// One entry per metric that could not be computed, in computation
    /// order.
    pub issues: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurvesReport {
    pub schema_version: u32,
    pub command: String,
    pub seed: u64,
    pub include_negative: bool,
    pub rows: Vec<CurveRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveRow {
    pub id: u32,
    pub dataset: String,
    pub points: Vec<CurvePoint>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurvePoint {
    pub level_pct: f64,
    pub minsup_count: u64,
    pub fi_count: u64,
    pub mean_support_pct: f64,
    pub mean_len: f64,
    pub pb_count: u64,
    pub pb_mean_len: f64,
    pub nb_count: Option<u64>,
    pub nb_mean_len: Option<f64>,
}

impl From<&SweepLevel> for CurvePoint {
    fn from(l: &SweepLevel) -> Self {
        CurvePoint {
            level_pct: l.level_pct,
            minsup_count: l.minsup_count,
            fi_count: l.fi_count,
            mean_support_pct: l.mean_support_pct,
            mean_len: l.mean_len,
            pb_count: l.pb_count,
            pb_mean_len: l.pb_mean_len,
            nb_count: l.nb_count,
            nb_mean_len: l.nb_mean_len,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClusterReport {
    pub schema_version: u32,
    pub command: String,
    pub seed: u64,
    pub k: usize,
    pub restarts: usize,
    pub features: Vec<String>,
    pub include_ds: bool,
    pub drop_h2: bool,
    pub dropped: Vec<String>,
    pub imputed_cells: Vec<ImputedCell>,
    pub inertia: f64,
    pub tree_accuracy_pct: f64,
    pub tree_internal_nodes: usize,
    pub assignment: Vec<AssignmentRow>,
    /// Cluster centers in the scaled feature space, by cluster label.
    pub centroids: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ImputedCell {
    pub id: u32,
    pub column: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AssignmentRow {
    pub id: u32,
    pub dataset: String,
    pub cluster: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MrbReport {
    pub schema_version: u32,
    pub command: String,
    pub seed: u64,
    pub minimum_size: usize,
    pub total_count: u64,
    /// True when `examples` lists fewer than `total_count` benchmarks.
    pub truncated: bool,
    pub examples: Vec<Vec<u32>>,
    pub audits: Vec<AuditRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AuditRow {
    pub study: String,
    pub size: usize,
    pub representative: bool,
    pub missing_clusters: Vec<u32>,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .context("cannot serialize report")?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text)
        .with_context(|| format!("cannot parse {}", path.display()))
}

fn comment_header(file: &mut fs::File, command: &str, seed: u64) -> Result<()> {
    writeln!(file, "# tdprof {command}")?;
    writeln!(file, "# seed: {seed}")?;
    Ok(())
}

fn fmt2(v: f64) -> String {
    format!("{v:.2}")
}

fn fmt2_opt(v: Option<f64>) -> String {
    v.map(fmt2).unwrap_or_default()
}

fn fmt_u64_opt(v: Option<u64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// Support levels as a space-joined list; `Display` keeps `10` and `0.1`
/// free of trailing zeros.
fn fmt_levels(levels: &[f64]) -> String {
    let parts: Vec<String> = levels.iter().map(|l| format!("{l}")).collect();
    parts.join(" ")
}

pub fn write_metrics_csv(path: &Path, report: &MetricsReport) -> Result<()> {
    let mut file = fs::File::create(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    comment_header(&mut file, &report.command, report.seed)?;
    writeln!(file, "# normalization: {}", report.normalization)?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record([
        "id", "dataset", "ds", "as", "ats", "mts", "f1", "ggd", "h1", "h2",
        "mss", "levels", "mcd", "asd", "fal", "pbc", "pbl", "nbc", "nbl",
    ])?;
    for r in &report.rows {
        w.write_record([
            r.id.to_string(),
            r.dataset.clone(),
            r.ds.to_string(),
            r.alphabet_size.to_string(),
            fmt2(r.ats),
            r.mts.to_string(),
            fmt2(r.f1),
            fmt2_opt(r.ggd),
            fmt2_opt(r.h1),
            fmt2_opt(r.h2),
            fmt2(r.mss),
            r.levels.as_deref().map(fmt_levels).unwrap_or_default(),
            fmt2_opt(r.mcd),
            fmt2_opt(r.asd),
            fmt2_opt(r.fal),
            fmt2_opt(r.pbc),
            fmt2_opt(r.pbl),
            fmt2_opt(r.nbc),
            fmt2_opt(r.nbl),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_curves_csv(path: &Path, report: &CurvesReport) -> Result<()> {
    let mut file = fs::File::create(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    comment_header(&mut file, &report.command, report.seed)?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record([
        "id",
        "dataset",
        "level_pct",
        "minsup_count",
        "fi_count",
        "mean_support_pct",
        "mean_len",
        "pb_count",
        "pb_mean_len",
        "nb_count",
        "nb_mean_len",
    ])?;
    for row in &report.rows {
        for p in &row.points {
            w.write_record([
                row.id.to_string(),
                row.dataset.clone(),
                format!("{}", p.level_pct),
                p.minsup_count.to_string(),
                p.fi_count.to_string(),
                fmt2(p.mean_support_pct),
                fmt2(p.mean_len),
                p.pb_count.to_string(),
                fmt2(p.pb_mean_len),
                fmt_u64_opt(p.nb_count),
                fmt2_opt(p.nb_mean_len),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_audit_csv(
    path: &Path,
    command: &str,
    seed: u64,
    audits: &[AuditRow],
) -> Result<()> {
    let mut file = fs::File::create(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    comment_header(&mut file, command, seed)?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(["study", "size", "representative", "missing_clusters"])?;
    for a in audits {
        let missing: Vec<String> =
            a.missing_clusters.iter().map(|c| c.to_string()).collect();
        w.write_record([
            a.study.clone(),
            a.size.to_string(),
            a.representative.to_string(),
            missing.join(" "),
        ])?;
    }
    w.flush()?;
    Ok(())
}
