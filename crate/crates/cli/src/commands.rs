//! Command implementations.
//!
//! Databases are processed in parallel but reported in input order, so
//! repeated runs over the same inputs produce byte-identical artifacts.
//! A command exits successfully iff its primary artifact was written;
//! per-file failures go to stderr and only fail the run when no input
//! survives.

use crate::cli::{
    CheckBenchmarkArgs, Cli, ClusterArgs, Command, MrbArgs, ProfileArgs,
    SweepArgs, SweepOpts, TableFormat,
};
use crate::input;
use crate::report::{
    self, AssignmentRow, AuditRow, ClusterReport, CurvePoint, CurveRow,
    CurvesReport, ImputedCell, MetricsReport, MetricsRow, MrbReport,
    SCHEMA_VERSION,
};
use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::error::Error;
use std::fs;
use std::path::{Path, PathBuf};
use tdprof_core::{
    check_representative, elemental_stats, entropy_k_capped, fit_tree,
    gaifman_density, kmeans, mine_frequent_capped,
    minimum_representative_benchmarks, minsup_count_for, robust_scale, sweep,
    sweep_metrics, Benchmark, ClusterModel, FeatureMatrix,
    FrequentItemsetCollection, MetricsError, MetricsOptions, SupportSchedule,
    TransactionDatabase,
};

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Profile(args) => with_pool(args.workers, || cmd_profile(&args)),
        Command::Sweep(args) => with_pool(args.workers, || cmd_sweep(&args)),
        Command::Cluster(args) => cmd_cluster(&args),
        Command::Mrb(args) => cmd_mrb(&args),
        Command::CheckBenchmark(args) => cmd_check_benchmark(&args),
    }
}

fn with_pool<F>(workers: Option<usize>, f: F) -> Result<()>
where
    F: FnOnce() -> Result<()> + Send,
{
    match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .context("cannot build worker pool")?
            .install(f),
        None => f(),
    }
}

/// Which support schedule to use, before seeing a concrete database.
enum ScheduleSpec {
    Auto,
    Levels(Vec<f64>),
    Range { start: f64, step: f64 },
}

fn schedule_spec(opts: &SweepOpts) -> Result<ScheduleSpec> {
    if let Some(levels) = &opts.levels {
        return Ok(ScheduleSpec::Levels(levels.clone()));
    }
    if let Some(range) = &opts.range {
        let (start, step) = range
            .split_once(':')
            .with_context(|| format!("--range takes START:STEP, got {range:?}"))?;
        let start: f64 = start
            .trim()
            .parse()
            .with_context(|| format!("--range start {start:?} is not a number"))?;
        let step: f64 = step
            .trim()
            .parse()
            .with_context(|| format!("--range step {step:?} is not a number"))?;
        return Ok(ScheduleSpec::Range { start, step });
    }
    Ok(ScheduleSpec::Auto)
}

fn resolve_schedule(
    spec: &ScheduleSpec,
    db: &TransactionDatabase,
) -> Result<SupportSchedule, MetricsError> {
    match spec {
        ScheduleSpec::Auto => SupportSchedule::auto(db.max_singleton_support_pct()),
        ScheduleSpec::Levels(levels) => {
            let schedule = SupportSchedule::new(levels.clone())?;
            schedule.validate_for(db)?;
            Ok(schedule)
        }
        ScheduleSpec::Range { start, step } => {
            SupportSchedule::from_step(*start, *step, db.max_singleton_support_pct())
        }
    }
}

fn metrics_options(opts: &SweepOpts) -> MetricsOptions {
    MetricsOptions {
        include_negative: opts.include_negative,
        normalization: opts.norm.to_core(),
        max_itemsets: opts.max_itemsets,
        combination_cap: opts.pair_cap,
    }
}

/// Message with the full source chain, for errors carrying a cause.
fn error_chain(err: &dyn Error) -> String {
    let mut message = err.to_string();
    let mut source = err.source();
    while let Some(cause) = source {
        message.push_str(": ");
        message.push_str(&cause.to_string());
        source = cause.source();
    }
    message
}

/// Splits per-file outcomes into ordered successes and printed failures.
fn split_outcomes<T>(outcomes: Vec<Result<T, String>>) -> (Vec<T>, usize) {
    let mut values = Vec::new();
    let mut failures = 0;
    for outcome in outcomes {
        match outcome {
            Ok(v) => values.push(v),
            Err(message) => {
                failures += 1;
                eprintln!("error: {message}");
            }
        }
    }
    (values, failures)
}

fn cmd_profile(args: &ProfileArgs) -> Result<()> {
    let files = input::collect_input_files(&args.inputs)?;
    let spec = schedule_spec(&args.sweep_opts)?;
    let opts = metrics_options(&args.sweep_opts);

    let outcomes: Vec<Result<MetricsRow, String>> = files
        .par_iter()
        .enumerate()
        .map(|(i, path)| match input::load_database(path) {
            Ok(db) => Ok(profile_row(i as u32 + 1, &db, &spec, &opts)),
            Err(err) => Err(format!("{err:#}")),
        })
        .collect();
    let (rows, failures) = split_outcomes(outcomes);
    if rows.is_empty() {
        bail!("all {failures} input file(s) failed");
    }

    let report = MetricsReport {
        schema_version: SCHEMA_VERSION,
        command: "profile".into(),
        seed: args.seed,
        normalization: args.sweep_opts.norm.name().into(),
        include_negative: args.sweep_opts.include_negative,
        rows,
    };
    fs::create_dir_all(&args.out)
        .with_context(|| format!("cannot create {}", args.out.display()))?;
    let path = match args.format {
        TableFormat::Csv => {
            let path = args.out.join("metrics.csv");
            report::write_metrics_csv(&path, &report)?;
            path
        }
        TableFormat::Json => {
            let path = args.out.join("metrics.json");
            report::write_json(&path, &report)?;
            path
        }
    };

    for row in &report.rows {
        let note = if row.issues.is_empty() {
            String::new()
        } else {
            format!(" [{} metric(s) unavailable]", row.issues.len())
        };
        println!(
            "{}: DS={} AS={} MSS={:.2}%{}",
            row.dataset, row.ds, row.alphabet_size, row.mss, note
        );
    }
    println!("wrote {}", path.display());
    Ok(())
}

/// One metric row. Metrics are computed independently so a failure in one
/// leaves the rest intact; each failure becomes an empty cell plus an
/// entry in `issues`.
fn profile_row(
    id: u32,
    db: &TransactionDatabase,
    spec: &ScheduleSpec,
    opts: &MetricsOptions,
) -> MetricsRow {
    let stats = elemental_stats(db);
    let mut issues = Vec::new();
    let mut record = |metric: &str, result: Result<f64, MetricsError>| match result {
        Ok(v) => Some(v),
        Err(err) => {
            issues.push(format!("{metric}: {}", error_chain(&err)));
            None
        }
    };
    let ggd = record("ggd", gaifman_density(db));
    let h1 = record("h1", entropy_k_capped(db, 1, opts.combination_cap));
    let h2 = record("h2", entropy_k_capped(db, 2, opts.combination_cap));

    let mut levels = None;
    let mut areas = None;
    match resolve_schedule(spec, db) {
        Err(err) => issues.push(format!("schedule: {}", error_chain(&err))),
        Ok(schedule) => {
            levels = Some(schedule.levels().to_vec());
            match sweep(db, &schedule, opts)
                .and_then(|curves| sweep_metrics(&curves, opts.normalization))
            {
                Ok(m) => areas = Some(m),
                Err(err) => issues.push(format!("sweep: {}", error_chain(&err))),
            }
        }
    }

    MetricsRow {
        id,
        dataset: db.name().to_string(),
        ds: stats.transaction_count,
        alphabet_size: stats.alphabet_size,
        ats: stats.mean_transaction_len,
        mts: stats.max_transaction_len,
        f1: stats.ones_fraction_pct,
        ggd,
        h1,
        h2,
        mss: stats.max_singleton_support_pct,
        levels,
        mcd: areas.as_ref().map(|a| a.fi_count_area),
        asd: areas.as_ref().map(|a| a.mean_support_area),
        fal: areas.as_ref().map(|a| a.fi_len_area),
        pbc: areas.as_ref().map(|a| a.pb_count_area),
        pbl: areas.as_ref().map(|a| a.pb_len_area),
        nbc: areas.as_ref().and_then(|a| a.nb_count_area),
        nbl: areas.as_ref().and_then(|a| a.nb_len_area),
        issues,
    }
}

struct SweepOutcome {
    row: CurveRow,
    dumps: Vec<(f64, FrequentItemsetCollection)>,
}

fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let files = input::collect_input_files(&args.inputs)?;
    let spec = schedule_spec(&args.sweep_opts)?;
    let opts = metrics_options(&args.sweep_opts);

    let outcomes: Vec<Result<SweepOutcome, String>> = files
        .par_iter()
        .enumerate()
        .map(|(i, path)| sweep_one(i as u32 + 1, path, &spec, &opts, args.dump_itemsets))
        .collect();
    let (done, failures) = split_outcomes(outcomes);
    if done.is_empty() {
        bail!("all {failures} input file(s) failed");
    }

    fs::create_dir_all(&args.out)
        .with_context(|| format!("cannot create {}", args.out.display()))?;
    if args.dump_itemsets {
        let dir = args.out.join("itemsets");
        fs::create_dir_all(&dir)
            .with_context(|| format!("cannot create {}", dir.display()))?;
        for outcome in &done {
            for (level, fi) in &outcome.dumps {
                let path =
                    dir.join(format!("{}-s{}.txt", outcome.row.dataset, level));
                write_itemset_dump(&path, fi)?;
            }
        }
    }

    let report = CurvesReport {
        schema_version: SCHEMA_VERSION,
        command: "sweep".into(),
        seed: args.seed,
        include_negative: args.sweep_opts.include_negative,
        rows: done.into_iter().map(|o| o.row).collect(),
    };
    let path = match args.format {
        TableFormat::Csv => {
            let path = args.out.join("curves.csv");
            report::write_curves_csv(&path, &report)?;
            path
        }
        TableFormat::Json => {
            let path = args.out.join("curves.json");
            report::write_json(&path, &report)?;
            path
        }
    };

    for row in &report.rows {
        println!("{}: {} support levels", row.dataset, row.points.len());
    }
    println!("wrote {}", path.display());
    Ok(())
}

fn sweep_one(
    id: u32,
    path: &Path,
    spec: &ScheduleSpec,
    opts: &MetricsOptions,
    dump: bool,
) -> Result<SweepOutcome, String> {
    let fail = |err: &dyn Error| format!("{}: {}", path.display(), error_chain(err));
    let db = input::load_database(path).map_err(|e| format!("{e:#}"))?;
    let schedule = resolve_schedule(spec, &db).map_err(|e| fail(&e))?;
    let curves = sweep(&db, &schedule, opts).map_err(|e| fail(&e))?;
    let dumps = if dump {
        // Mine once at the lowest level; every level above is an exact
        // support-filtered restriction.
        let base_count = minsup_count_for(schedule.first(), db.transaction_count());
        let base = mine_frequent_capped(&db, base_count, opts.max_itemsets)
            .map_err(|e| fail(&e))?;
        schedule
            .levels()
            .iter()
            .map(|&level| {
                let count = minsup_count_for(level, db.transaction_count());
                (level, base.filter_at(count))
            })
            .collect()
    } else {
        Vec::new()
    };
    Ok(SweepOutcome {
        row: CurveRow {
            id,
            dataset: db.name().to_string(),
            points: curves.levels().iter().map(CurvePoint::from).collect(),
        },
        dumps,
    })
}

/// One itemset per line: space-joined items, then ` #SUP: <count>`.
fn write_itemset_dump(path: &Path, fi: &FrequentItemsetCollection) -> Result<()> {
    let mut text = String::new();
    for (itemset, support) in fi.iter() {
        let items: Vec<String> = itemset.iter().map(|i| i.to_string()).collect();
        text.push_str(&items.join(" "));
        text.push_str(" #SUP: ");
        text.push_str(&support.to_string());
        text.push('\n');
    }
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

/// Metric columns used for clustering, in table order. The transaction
/// count is opt-in: it spans four orders of magnitude and swamps distance
/// once scaled. Negative-border columns are never used because they are
/// absent from most tables.
fn feature_list(include_ds: bool, drop_h2: bool) -> Vec<String> {
    let mut features: Vec<&str> = Vec::new();
    if include_ds {
        features.push("ds");
    }
    features.extend(["as", "ats", "mts", "f1", "ggd", "h1"]);
    if !drop_h2 {
        features.push("h2");
    }
    features.extend(["mss", "mcd", "asd", "fal", "pbc", "pbl"]);
    features.into_iter().map(String::from).collect()
}

fn cmd_cluster(args: &ClusterArgs) -> Result<()> {
    let table = input::read_metric_table(&args.table)?;
    let mut features = feature_list(args.include_ds, args.drop_h2);
    for dropped in &args.drop {
        let at = features.iter().position(|f| f == dropped).with_context(|| {
            format!("--drop {dropped:?} does not name an active feature")
        })?;
        features.remove(at);
    }
    if features.is_empty() {
        bail!("no features left after --drop");
    }
    let mut picked = Vec::with_capacity(features.len());
    for feature in &features {
        let col = table
            .columns
            .iter()
            .position(|c| c == feature)
            .with_context(|| {
                format!(
                    "{}: metric table lacks column {:?}",
                    args.table.display(),
                    feature
                )
            })?;
        picked.push(col);
    }
    let rows: Vec<Vec<Option<f64>>> = table
        .rows
        .iter()
        .map(|row| picked.iter().map(|&c| row[c]).collect())
        .collect();

    let matrix = FeatureMatrix::new(
        table.ids.clone(),
        table.names.clone(),
        features.clone(),
        rows,
    )?;
    let scaled = robust_scale(&matrix)?;
    let model = kmeans(&scaled.data, args.k, args.restarts, args.seed)?;

    // The tree explains clusters in the units people read in the table,
    // so it grows over unscaled (imputed) values.
    let (unscaled, _) = matrix.impute_median()?;
    let max_depth = args.max_depth.unwrap_or(usize::MAX);
    let tree = fit_tree(&unscaled, model.assignment(), max_depth)?;

    fs::create_dir_all(&args.out)
        .with_context(|| format!("cannot create {}", args.out.display()))?;
    let report = ClusterReport {
        schema_version: SCHEMA_VERSION,
        command: "cluster".into(),
        seed: args.seed,
        k: args.k,
        restarts: args.restarts,
        features,
        include_ds: args.include_ds,
        drop_h2: args.drop_h2,
        dropped: args.drop.clone(),
        imputed_cells: scaled
            .imputed
            .iter()
            .map(|&(row, col)| ImputedCell {
                id: table.ids[row],
                column: matrix.columns()[col].clone(),
            })
            .collect(),
        inertia: model.inertia(),
        tree_accuracy_pct: tree.accuracy_pct(),
        tree_internal_nodes: tree.internal_node_count(),
        assignment: table
            .ids
            .iter()
            .zip(&table.names)
            .zip(model.assignment())
            .map(|((&id, name), &cluster)| AssignmentRow {
                id,
                dataset: name.clone(),
                cluster,
            })
            .collect(),
        centroids: model.centroids().to_vec(),
    };
    let clusters_path = args.out.join("clusters.json");
    report::write_json(&clusters_path, &report)?;

    let tree_path = args.out.join("tree.txt");
    let mut text = format!(
        "split rules over unscaled metric values; training accuracy {:.2}%\n\n",
        tree.accuracy_pct()
    );
    text.push_str(&tree.render());
    fs::write(&tree_path, text)
        .with_context(|| format!("cannot write {}", tree_path.display()))?;

    for cluster in model.non_empty_clusters() {
        let members = model.members_of(cluster);
        let names: Vec<String> = members
            .iter()
            .map(|&id| id.to_string())
            .collect();
        println!("cluster {cluster}: {} datasets ({})", members.len(), names.join(" "));
    }
    println!(
        "tree: {:.2}% training accuracy, {} split(s)",
        tree.accuracy_pct(),
        tree.internal_node_count()
    );
    println!("wrote {} and {}", clusters_path.display(), tree_path.display());
    Ok(())
}

fn model_from_report(report: &ClusterReport) -> Result<ClusterModel> {
    let ids: Vec<u32> = report.assignment.iter().map(|a| a.id).collect();
    let names: Vec<String> =
        report.assignment.iter().map(|a| a.dataset.clone()).collect();
    let labels: Vec<u32> = report.assignment.iter().map(|a| a.cluster).collect();
    ClusterModel::from_assignment(ids, names, labels, report.k, report.seed)
        .context("invalid clustering report")
}

fn audit_studies(
    paths: &[PathBuf],
    report: &ClusterReport,
    model: &ClusterModel,
) -> Result<Vec<AuditRow>> {
    let names_to_ids: BTreeMap<String, u32> = report
        .assignment
        .iter()
        .map(|a| (a.dataset.clone(), a.id))
        .collect();
    let mut audits = Vec::new();
    for path in paths {
        let (study, ids) = input::read_study(path, &names_to_ids)?;
        let benchmark = Benchmark {
            name: study.clone(),
            members: ids.into_iter().collect(),
        };
        let verdict = check_representative(&benchmark, model)?;
        audits.push(AuditRow {
            study,
            size: benchmark.members.len(),
            representative: verdict.representative,
            missing_clusters: verdict.missing_clusters,
        });
    }
    Ok(audits)
}

fn print_audits(audits: &[AuditRow]) {
    for a in audits {
        if a.representative {
            println!("{}: representative ({} datasets)", a.study, a.size);
        } else {
            let missing: Vec<String> =
                a.missing_clusters.iter().map(|c| c.to_string()).collect();
            println!(
                "{}: NOT representative ({} datasets; misses cluster(s) {})",
                a.study,
                a.size,
                missing.join(" ")
            );
        }
    }
}

fn cmd_mrb(args: &MrbArgs) -> Result<()> {
    let cluster_report: ClusterReport = report::read_json(&args.clusters)?;
    let model = model_from_report(&cluster_report)?;
    let mrb = minimum_representative_benchmarks(&model, args.limit)?;
    let audits = audit_studies(&args.studies, &cluster_report, &model)?;

    fs::create_dir_all(&args.out)
        .with_context(|| format!("cannot create {}", args.out.display()))?;
    let truncated = (mrb.examples.len() as u64) < mrb.total_count;
    let mrb_report = MrbReport {
        schema_version: SCHEMA_VERSION,
        command: "mrb".into(),
        seed: cluster_report.seed,
        minimum_size: mrb.minimum_size,
        total_count: mrb.total_count,
        truncated,
        examples: mrb.examples,
        audits: audits.clone(),
    };
    let mrb_path = args.out.join("mrb.json");
    report::write_json(&mrb_path, &mrb_report)?;
    if !audits.is_empty() {
        let audit_path = args.out.join("audit.csv");
        report::write_audit_csv(&audit_path, "mrb", cluster_report.seed, &audits)?;
    }

    println!(
        "minimum representative benchmark: {} datasets, {} distinct choice(s)",
        mrb_report.minimum_size, mrb_report.total_count
    );
    print_audits(&audits);
    println!("wrote {}", mrb_path.display());
    Ok(())
}

fn cmd_check_benchmark(args: &CheckBenchmarkArgs) -> Result<()> {
    let cluster_report: ClusterReport = report::read_json(&args.clusters)?;
    let model = model_from_report(&cluster_report)?;
    let audits = audit_studies(&args.studies, &cluster_report, &model)?;

    fs::create_dir_all(&args.out)
        .with_context(|| format!("cannot create {}", args.out.display()))?;
    let path = args.out.join("audit.csv");
    report::write_audit_csv(&path, "check-benchmark", cluster_report.seed, &audits)?;

    print_audits(&audits);
    println!("wrote {}", path.display());
    Ok(())
}
