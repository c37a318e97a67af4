//! End-to-end tests driving the compiled binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_tdprof")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary should run")
}

fn run_ok(args: &[&str]) -> Output {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

/// Rows of a metrics CSV as header-keyed cells, comments skipped.
fn parse_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<String> = lines
        .next()
        .unwrap()
        .split(',')
        .map(str::to_string)
        .collect();
    let rows: Vec<Vec<String>> = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    (header, rows)
}

fn cell<'a>(header: &[String], row: &'a [String], name: &str) -> &'a str {
    let col = header.iter().position(|h| h == name).unwrap();
    &row[col]
}

#[test]
fn profile_writes_expected_metrics_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    run_ok(&[
        "profile",
        fixture("tiny_dense.dat").to_str().unwrap(),
        fixture("tiny_sparse.dat").to_str().unwrap(),
        "--levels",
        "50,100",
        "--include-negative",
        "--out",
        out.to_str().unwrap(),
    ]);

    let (header, rows) = parse_csv(&out.join("metrics.csv"));
    assert_eq!(rows.len(), 2);

    // Dense database: 3 transactions over items {1,2,3}; every sweep
    // value below was computed by hand from the mined itemsets.
    let dense = &rows[0];
    assert_eq!(cell(&header, dense, "id"), "1");
    assert_eq!(cell(&header, dense, "dataset"), "tiny_dense");
    assert_eq!(cell(&header, dense, "ds"), "3");
    assert_eq!(cell(&header, dense, "as"), "3");
    assert_eq!(cell(&header, dense, "ats"), "2.67");
    assert_eq!(cell(&header, dense, "mts"), "3");
    assert_eq!(cell(&header, dense, "f1"), "88.89");
    assert_eq!(cell(&header, dense, "ggd"), "100.00");
    assert_eq!(cell(&header, dense, "h1"), "1.56");
    assert_eq!(cell(&header, dense, "h2"), "1.56");
    assert_eq!(cell(&header, dense, "mss"), "100.00");
    assert_eq!(cell(&header, dense, "levels"), "50 100");
    assert_eq!(cell(&header, dense, "mcd"), "3571.43");
    assert_eq!(cell(&header, dense, "asd"), "4523.81");
    assert_eq!(cell(&header, dense, "fal"), "76.19");
    assert_eq!(cell(&header, dense, "pbc"), "5000.00");
    assert_eq!(cell(&header, dense, "pbl"), "125.00");
    assert_eq!(cell(&header, dense, "nbc"), "2500.00");
    assert_eq!(cell(&header, dense, "nbl"), "25.00");

    // Sparse database: its maximum singleton support is 33.33%, so the
    // explicit 50/100 schedule does not fit; sweep cells stay empty while
    // the distributional metrics survive.
    let sparse = &rows[1];
    assert_eq!(cell(&header, sparse, "dataset"), "tiny_sparse");
    assert_eq!(cell(&header, sparse, "ds"), "3");
    assert_eq!(cell(&header, sparse, "as"), "4");
    assert_eq!(cell(&header, sparse, "ggd"), "16.67");
    assert_eq!(cell(&header, sparse, "h1"), "2.00");
    assert_eq!(cell(&header, sparse, "mss"), "33.33");
    assert_eq!(cell(&header, sparse, "levels"), "");
    assert_eq!(cell(&header, sparse, "mcd"), "");
    assert_eq!(cell(&header, sparse, "nbl"), "");
}

#[test]
fn profile_json_matches_csv_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    run_ok(&[
        "profile",
        fixture("tiny_dense.dat").to_str().unwrap(),
        fixture("tiny_sparse.dat").to_str().unwrap(),
        "--levels",
        "50,100",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);

    let report: tdprof::report::MetricsReport =
        tdprof::report::read_json(&out.join("metrics.json")).unwrap();
    assert_eq!(report.schema_version, 1);
    assert_eq!(report.command, "profile");
    assert_eq!(report.rows.len(), 2);

    let dense = &report.rows[0];
    assert_eq!(dense.dataset, "tiny_dense");
    assert!((dense.ats - 8.0 / 3.0).abs() < 1e-9);
    assert!((dense.ggd.unwrap() - 100.0).abs() < 1e-9);
    assert!((dense.mcd.unwrap() - 25000.0 / 7.0).abs() < 1e-9);
    assert!(dense.nbc.is_none(), "negative border not requested");
    assert!(dense.issues.is_empty());

    let sparse = &report.rows[1];
    assert!(sparse.mcd.is_none());
    assert!(
        sparse.issues.iter().any(|i| i.starts_with("schedule:")),
        "schedule failure should be recorded: {:?}",
        sparse.issues
    );
}

#[test]
fn profile_auto_schedule_covers_both_regimes() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    fs::create_dir(&data).unwrap();
    // MSS 100%: expect the coarse 10..100 schedule.
    fs::write(data.join("a.dat"), "1 2\n1 2\n").unwrap();
    // MSS = 2/30 ≈ 6.67%: expect a fine 1%-step schedule.
    let mut sparse = String::new();
    for t in 0..30 {
        if t % 15 == 0 {
            sparse.push_str(&format!("{} 1\n", 100 + t));
        } else {
            sparse.push_str(&format!("{}\n", 100 + t));
        }
    }
    fs::write(data.join("b.dat"), sparse).unwrap();

    let out = dir.path().join("out");
    run_ok(&[
        "profile",
        data.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    let (header, rows) = parse_csv(&out.join("metrics.csv"));
    assert_eq!(
        cell(&header, &rows[0], "levels"),
        "10 20 30 40 50 60 70 80 90 100"
    );
    assert_eq!(cell(&header, &rows[1], "levels"), "1 2 3 4 5 6");
}

#[test]
fn per_file_errors_fail_only_when_everything_fails() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    fs::create_dir(&data).unwrap();
    fs::write(data.join("bad.dat"), "1 2\nthree\n").unwrap();
    fs::write(data.join("good.dat"), "1 2\n2 3\n").unwrap();

    // One parse failure, one success: exit 0, failure on stderr, good row
    // in the artifact.
    let out1 = dir.path().join("out1");
    let output = run(&[
        "profile",
        data.to_str().unwrap(),
        "--out",
        out1.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("bad.dat"), "stderr: {stderr}");
    let (_, rows) = parse_csv(&out1.join("metrics.csv"));
    assert_eq!(rows.len(), 1);

    // Only failures: nonzero exit, no artifact.
    let out2 = dir.path().join("out2");
    let output = run(&[
        "profile",
        data.join("bad.dat").to_str().unwrap(),
        "--out",
        out2.to_str().unwrap(),
    ]);
    assert!(!output.status.success());
    assert!(!out2.join("metrics.csv").exists());
}

#[test]
fn empty_directory_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    fs::create_dir(&data).unwrap();
    let output = run(&["profile", data.to_str().unwrap()]);
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("no input files"), "stderr: {stderr}");
}

#[test]
fn malformed_line_is_reported_with_its_number() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.dat");
    fs::write(&bad, "1 2\n\n7 x 9\n").unwrap();
    let output = run(&["profile", bad.to_str().unwrap()]);
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(
        stderr.contains("line 3") && stderr.contains('x'),
        "stderr: {stderr}"
    );
}

#[test]
fn sweep_dumps_itemsets_per_level() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    run_ok(&[
        "sweep",
        fixture("tiny_dense.dat").to_str().unwrap(),
        "--levels",
        "50,100",
        "--dump-itemsets",
        "--out",
        out.to_str().unwrap(),
    ]);

    let dump50 =
        fs::read_to_string(out.join("itemsets/tiny_dense-s50.txt")).unwrap();
    assert_eq!(
        dump50,
        "1 #SUP: 3\n1 2 #SUP: 3\n1 2 3 #SUP: 2\n1 3 #SUP: 2\n2 #SUP: 3\n2 3 #SUP: 2\n3 #SUP: 2\n"
    );
    let dump100 =
        fs::read_to_string(out.join("itemsets/tiny_dense-s100.txt")).unwrap();
    assert_eq!(dump100, "1 #SUP: 3\n1 2 #SUP: 3\n2 #SUP: 3\n");

    let (header, rows) = parse_csv(&out.join("curves.csv"));
    assert_eq!(rows.len(), 2);
    assert_eq!(cell(&header, &rows[0], "level_pct"), "50");
    assert_eq!(cell(&header, &rows[0], "fi_count"), "7");
    assert_eq!(cell(&header, &rows[1], "level_pct"), "100");
    assert_eq!(cell(&header, &rows[1], "fi_count"), "3");
    assert_eq!(cell(&header, &rows[1], "minsup_count"), "3");
}

fn published_partition() -> Vec<Vec<u32>> {
    vec![
        vec![1, 2, 3, 5, 6, 7, 9, 13, 18, 19],
        vec![4, 8, 10, 11, 14, 21],
        vec![12, 16, 17, 20],
        vec![15],
    ]
}

fn partition_of(report: &tdprof::report::ClusterReport) -> Vec<Vec<u32>> {
    let mut clusters: Vec<Vec<u32>> = Vec::new();
    for row in &report.assignment {
        let c = row.cluster as usize;
        if clusters.len() <= c {
            clusters.resize(c + 1, Vec::new());
        }
        clusters[c].push(row.id);
    }
    for c in &mut clusters {
        c.sort_unstable();
    }
    clusters.sort();
    clusters
}

#[test]
fn cluster_mrb_and_audit_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    run_ok(&[
        "cluster",
        fixture("corpus_metrics.csv").to_str().unwrap(),
        "--seed",
        "0",
        "--drop",
        "as,mts",
        "--out",
        out.to_str().unwrap(),
    ]);

    let report: tdprof::report::ClusterReport =
        tdprof::report::read_json(&out.join("clusters.json")).unwrap();
    assert_eq!(report.k, 4);
    assert_eq!(report.restarts, 500);
    let mut expected = published_partition();
    expected.sort();
    assert_eq!(partition_of(&report), expected);
    assert_eq!(report.tree_accuracy_pct, 100.0);
    assert!(report.tree_internal_nodes <= 3);
    // The two H2 holes in the fixture (kosarak, chainstore) are imputed.
    let imputed: Vec<(u32, &str)> = report
        .imputed_cells
        .iter()
        .map(|c| (c.id, c.column.as_str()))
        .collect();
    assert_eq!(imputed, vec![(16, "h2"), (21, "h2")]);

    let tree = fs::read_to_string(out.join("tree.txt")).unwrap();
    assert!(tree.contains("<="));
    assert!(tree.contains("-> cluster"));

    // Audit every fixture study against the clustering.
    let studies_dir = fixture("studies");
    let mut study_files: Vec<PathBuf> = fs::read_dir(&studies_dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    study_files.sort();
    let mut args: Vec<String> = vec![
        "mrb".into(),
        out.join("clusters.json").to_str().unwrap().into(),
    ];
    args.extend(study_files.iter().map(|p| p.to_str().unwrap().to_string()));
    args.extend(["--limit".into(), "7".into(), "--out".into(), out.to_str().unwrap().into()]);
    let arg_refs: Vec<&str> = args.iter().map(String::as_str).collect();
    run_ok(&arg_refs);

    let mrb: tdprof::report::MrbReport =
        tdprof::report::read_json(&out.join("mrb.json")).unwrap();
    assert_eq!(mrb.minimum_size, 4);
    assert_eq!(mrb.total_count, 240);
    assert_eq!(mrb.examples.len(), 7);
    assert!(mrb.truncated);
    for example in &mrb.examples {
        assert_eq!(example.len(), 4);
    }
    assert_eq!(mrb.audits.len(), 11);
    assert!(mrb.audits.iter().all(|a| !a.representative));

    // study-01 covers everything except the cluster holding dataset 15.
    let first = &mrb.audits[0];
    assert_eq!(first.study, "study-01");
    let cluster_of_15 = report
        .assignment
        .iter()
        .find(|r| r.id == 15)
        .unwrap()
        .cluster;
    assert_eq!(first.missing_clusters, vec![cluster_of_15]);
}

#[test]
fn check_benchmark_accepts_a_hitting_set() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    run_ok(&[
        "cluster",
        fixture("corpus_metrics.csv").to_str().unwrap(),
        "--drop",
        "as,mts",
        "--out",
        out.to_str().unwrap(),
    ]);

    // One dataset per published cluster, referenced by name and by id.
    let study = dir.path().join("covering.txt");
    fs::write(&study, "covering\nchess\nfoodmart\n12\nrecordLink\n").unwrap();
    let output = run_ok(&[
        "check-benchmark",
        out.join("clusters.json").to_str().unwrap(),
        study.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("covering: representative"), "{stdout}");

    let audit = fs::read_to_string(out.join("audit.csv")).unwrap();
    assert!(audit.contains("covering,4,true,"), "{audit}");
}

#[test]
fn unknown_benchmark_reference_names_study_and_id() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    run_ok(&[
        "cluster",
        fixture("corpus_metrics.csv").to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);

    let by_id = dir.path().join("ghost-id.txt");
    fs::write(&by_id, "ghost-id\n99\n").unwrap();
    let output = run(&[
        "check-benchmark",
        out.join("clusters.json").to_str().unwrap(),
        by_id.to_str().unwrap(),
    ]);
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(
        stderr.contains("ghost-id") && stderr.contains("99"),
        "stderr: {stderr}"
    );

    let by_name = dir.path().join("ghost-name.txt");
    fs::write(&by_name, "ghost-name\nnosuchdata\n").unwrap();
    let output = run(&[
        "check-benchmark",
        out.join("clusters.json").to_str().unwrap(),
        by_name.to_str().unwrap(),
    ]);
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(
        stderr.contains("ghost-name") && stderr.contains("nosuchdata"),
        "stderr: {stderr}"
    );
}

#[test]
fn cluster_rejects_unknown_drop_column() {
    let output = run(&[
        "cluster",
        fixture("corpus_metrics.csv").to_str().unwrap(),
        "--drop",
        "nb_something",
    ]);
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("nb_something"), "stderr: {stderr}");
}

#[test]
fn conflicting_schedule_flags_are_rejected() {
    let output = run(&[
        "profile",
        fixture("tiny_dense.dat").to_str().unwrap(),
        "--levels",
        "10,20",
        "--range",
        "10:10",
    ]);
    assert!(!output.status.success());
}

#[test]
fn range_schedule_caps_at_singleton_support() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    run_ok(&[
        "profile",
        fixture("tiny_sparse.dat").to_str().unwrap(),
        "--range",
        "10:10",
        "--out",
        out.to_str().unwrap(),
    ]);
    // MSS of the sparse fixture is 33.33%, so the 10%-step run stops at 30.
    let (header, rows) = parse_csv(&out.join("metrics.csv"));
    assert_eq!(cell(&header, &rows[0], "levels"), "10 20 30");
}
