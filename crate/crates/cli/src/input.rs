//! Input handling: transaction files, metric tables, benchmark files.

use crate::report::MetricsReport;
use anyhow::{bail, Context, Result};
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use tdprof_core::TransactionDatabase;

/// Expands the given paths into a flat list of files. Directories are
/// scanned one level deep with entries in name order; explicit files are
/// kept as given. The overall order follows the argument order.
pub fn collect_input_files(inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for input in inputs {
        let meta = fs::metadata(input)
            .with_context(|| format!("cannot read {}", input.display()))?;
        if meta.is_dir() {
            let mut entries = Vec::new();
            for entry in fs::read_dir(input)
                .with_context(|| format!("cannot list {}", input.display()))?
            {
                let entry = entry
                    .with_context(|| format!("cannot list {}", input.display()))?;
                if entry.file_type().map(|t| t.is_file()).unwrap_or(false) {
                    entries.push(entry.path());
                }
            }
            entries.sort();
            files.extend(entries);
        } else {
            files.push(input.clone());
        }
    }
    if files.is_empty() {
        bail!("no input files found");
    }
    Ok(files)
}

/// File stem, used as the dataset name everywhere downstream.
pub fn dataset_name(path: &Path) -> String {
    match path.file_stem() {
        Some(stem) => stem.to_string_lossy().into_owned(),
        None => path.display().to_string(),
    }
}

pub fn load_database(path: &Path) -> Result<TransactionDatabase> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    TransactionDatabase::parse(&text, dataset_name(path))
        .with_context(|| format!("cannot parse {}", path.display()))
}

/// A parsed metric table: one row per dataset, metric columns by name,
/// empty cells explicit.
#[derive(Debug, Clone)]
pub struct MetricTable {
    pub ids: Vec<u32>,
    pub names: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

pub fn read_metric_table(path: &Path) -> Result<MetricTable> {
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        table_from_json(path)
    } else {
        table_from_csv(path)
    }
}

fn table_from_csv(path: &Path) -> Result<MetricTable> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("cannot read {}", path.display()))?;

    let headers = reader
        .headers()
        .with_context(|| format!("cannot read {}", path.display()))?
        .clone();
    let find = |name: &str| headers.iter().position(|h| h == name);
    let id_col = find("id")
        .with_context(|| format!("{}: missing column \"id\"", path.display()))?;
    let name_col = find("dataset")
        .with_context(|| format!("{}: missing column \"dataset\"", path.display()))?;

    // Everything except identity and the schedule echo is a value column.
    let value_cols: Vec<(usize, String)> = headers
        .iter()
        .enumerate()
        .filter(|&(i, h)| i != id_col && i != name_col && h != "levels")
        .map(|(i, h)| (i, h.to_string()))
        .collect();

    let mut ids = Vec::new();
    let mut names = Vec::new();
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record =
            record.with_context(|| format!("cannot read {}", path.display()))?;
        let cell = |col: usize| record.get(col).unwrap_or("");
        let id: u32 = cell(id_col).parse().with_context(|| {
            format!("{}: row {}: bad id {:?}", path.display(), line + 1, cell(id_col))
        })?;
        let mut row = Vec::with_capacity(value_cols.len());
        for (col, header) in &value_cols {
            let raw = cell(*col);
            if raw.is_empty() {
                row.push(None);
            } else {
                let v: f64 = raw.parse().with_context(|| {
                    format!(
                        "{}: row {}: column {:?}: bad number {:?}",
                        path.display(),
                        line + 1,
                        header,
                        raw
                    )
                })?;
                row.push(Some(v));
            }
        }
        ids.push(id);
        names.push(cell(name_col).to_string());
        rows.push(row);
    }

    Ok(MetricTable {
        ids,
        names,
        columns: value_cols.into_iter().map(|(_, h)| h).collect(),
        rows,
    })
}

fn table_from_json(path: &Path) -> Result<MetricTable> {
    let report: MetricsReport = crate::report::read_json(path)?;
    let columns: Vec<String> = [
        "ds", "as", "ats", "mts", "f1", "ggd", "h1", "h2", "mss", "mcd",
        "asd", "fal", "pbc", "pbl", "nbc", "nbl",
    ]
    .into_iter()
    .map(String::from)
    .collect();

    let mut ids = Vec::new();
    let mut names = Vec::new();
    let mut rows = Vec::new();
    for r in &report.rows {
        ids.push(r.id);
        names.push(r.dataset.clone());
        rows.push(vec![
            Some(r.ds as f64),
            Some(r.alphabet_size as f64),
            Some(r.ats),
            Some(r.mts as f64),
            Some(r.f1),
            r.ggd,
            r.h1,
            r.h2,
            Some(r.mss),
            r.mcd,
            r.asd,
            r.fal,
            r.pbc,
            r.pbl,
            r.nbc,
            r.nbl,
        ]);
    }
    Ok(MetricTable {
        ids,
        names,
        columns,
        rows,
    })
}

/// Reads one benchmark file: first non-empty line is the study name, each
/// further non-empty line one dataset id or dataset name.
pub fn read_study(
    path: &Path,
    names_to_ids: &BTreeMap<String, u32>,
) -> Result<(String, Vec<u32>)> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let name = lines
        .next()
        .with_context(|| format!("{}: empty benchmark file", path.display()))?
        .to_string();
    let mut ids = Vec::new();
    for token in lines {
        if let Ok(id) = token.parse::<u32>() {
            ids.push(id);
        } else if let Some(&id) = names_to_ids.get(token) {
            ids.push(id);
        } else {
            bail!(
                "{}: benchmark {:?} names unknown dataset {:?}",
                path.display(),
                name,
                token
            );
        }
    }
    Ok((name, ids))
}
