use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Arc;

use kz_coreset::eval::reference_points;
use kz_coreset::{MetricBackend, PointSet};
use kz_coreset_cli::ingest::serialize;

fn kzcoreset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kzcoreset")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = kzcoreset(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn reference_csv(dir: &Path) -> PathBuf {
    let pts = reference_points::<f64>(2024);
    let ps = PointSet::unweighted(Arc::new(MetricBackend::euclidean(&pts, 2.0).unwrap())).unwrap();
    let (_, text) = serialize(&ps).unwrap();
    let path = dir.join("reference.csv");
    std::fs::write(&path, text).unwrap();
    path
}

fn small_csv(dir: &Path) -> PathBuf {
    let text: String = (0..300).map(|i| format!("{},{}\n", (i * 37) % 101, (i * 53) % 89)).collect();
    let path = dir.join("small.csv");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn build_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let input = reference_csv(dir.path());
    let input = input.to_str().unwrap();
    let mut outputs = Vec::new();
    for run in 0..2 {
        let out = dir.path().join(format!("coreset{run}.json"));
        let report = dir.path().join(format!("report{run}.json"));
        ok(&[
            "build", "--input", input, "--k", "10", "--z", "2", "--eps", "0.2", "--delta-main", "200",
            "--delta-outer", "200", "--seed", "11", "--out", out.to_str().unwrap(), "--report",
            report.to_str().unwrap(),
        ]);
        outputs.push((std::fs::read(&out).unwrap(), std::fs::read(&report).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    let coreset = kz_coreset::Coreset::<f64>::from_json(std::str::from_utf8(&outputs[0].0).unwrap()).unwrap();
    assert!(coreset.len() <= coreset.cardinality_bound());
}

#[test]
fn build_writes_csv_by_extension() {
    let dir = tempfile::tempdir().unwrap();
    let input = small_csv(dir.path());
    let out = dir.path().join("coreset.csv");
    ok(&[
        "build", "--input", input.to_str().unwrap(), "--k", "3", "--eps", "0.25", "--delta-main", "20",
        "--delta-outer", "20", "--out", out.to_str().unwrap(),
    ]);
    let rows = kz_coreset::pipeline::read_coreset_csv::<f64>(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert!(!rows.is_empty());
}

#[test]
fn identity_eval_has_zero_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = small_csv(dir.path());
    let report = dir.path().join("eval.json");
    ok(&[
        "eval", "--input", input.to_str().unwrap(), "--k", "4", "--z", "2", "--eps", "0.2", "--identity",
        "--per-kind", "10", "--report", report.to_str().unwrap(),
    ]);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    let rows = report["per_solution"].as_array().unwrap();
    assert_eq!(rows.len(), 40);
    for row in rows {
        assert_eq!(row["absolute"].as_f64(), Some(0.0));
    }
    assert_eq!(report["summary"]["max"].as_f64(), Some(0.0));
}

#[test]
fn eval_of_built_coreset_matches_source() {
    let dir = tempfile::tempdir().unwrap();
    let input = small_csv(dir.path());
    let input = input.to_str().unwrap();
    let coreset = dir.path().join("c.json");
    ok(&[
        "build", "--input", input, "--k", "3", "--eps", "0.25", "--pi", "0.1", "--out", coreset.to_str().unwrap(),
    ]);
    let report = dir.path().join("eval.csv");
    ok(&[
        "eval", "--input", input, "--k", "3", "--eps", "0.25", "--coreset", coreset.to_str().unwrap(),
        "--per-kind", "5", "--report", report.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(report).unwrap();
    assert!(text.starts_with("solution,fingerprint,exact,coreset,relative,absolute\n"));
    assert_eq!(text.lines().count(), 21);

    // A coreset evaluated against another input is refused.
    let other = dir.path().join("other.csv");
    std::fs::write(&other, "0,0\n1,1\n2,2\n5,5\n9,9\n").unwrap();
    let out = kzcoreset(&[
        "eval", "--input", other.to_str().unwrap(), "--k", "3", "--eps", "0.25", "--coreset",
        coreset.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_writes_one_row_per_delta() {
    let dir = tempfile::tempdir().unwrap();
    let input = small_csv(dir.path());
    let out = dir.path().join("sweep.csv");
    ok(&[
        "sweep", "--input", input.to_str().unwrap(), "--k", "3", "--eps", "0.2", "--deltas", "100,200,400",
        "--per-kind", "5", "--out", out.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "delta,seed,max,mean,median,p95");
    assert_eq!(lines.len(), 4);
    for (line, delta) in lines[1..].iter().zip(["100", "200", "400"]) {
        assert!(line.starts_with(&format!("{delta},0,")), "{line}");
    }
}

#[test]
fn inspect_dumps_labels_and_groups() {
    let dir = tempfile::tempdir().unwrap();
    let input = small_csv(dir.path());
    let out = ok(&["inspect", "--input", input.to_str().unwrap(), "--k", "3", "--eps", "0.2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("point\tsite\tlabel\n"));
    assert!(text.contains("group\tsize\tcost\taction\n"));
    assert_eq!(text.lines().take_while(|l| !l.starts_with("group")).count(), 301);
}

#[test]
fn net_verify_on_a_small_graph() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("g.txt");
    let edges: String = (0..11).map(|v| format!("{v} {} 1\n", v + 1)).collect();
    std::fs::write(&input, edges).unwrap();
    let out = ok(&[
        "net-verify", "--input", input.to_str().unwrap(), "--format", "edges_txt", "--k", "1", "--z", "1",
        "--eps", "0.3", "--trials", "12",
    ]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["report"]["violations"].as_u64(), Some(0));
    assert_eq!(report["report"]["solutions"].as_u64(), Some(12));

    let refused = kzcoreset(&[
        "net-verify", "--input", input.to_str().unwrap(), "--format", "edges_txt", "--k", "1", "--eps", "0.3",
        "--cap", "5",
    ]);
    assert_eq!(refused.status.code(), Some(2));
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let input = small_csv(dir.path());
    let input = input.to_str().unwrap();
    let out = dir.path().join("c.json");
    let out = out.to_str().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        // Both explicit and heuristic sample sizes.
        vec!["build", "--input", input, "--k", "3", "--eps", "0.2", "--delta-main", "5", "--delta-outer", "5", "--pi", "0.1", "--out", out],
        // Neither.
        vec!["build", "--input", input, "--k", "3", "--eps", "0.2", "--out", out],
        // Half of the explicit pair.
        vec!["build", "--input", input, "--k", "3", "--eps", "0.2", "--delta-main", "5", "--out", out],
        // eps outside (0, 1/3).
        vec!["build", "--input", input, "--k", "3", "--eps", "0.5", "--delta-main", "5", "--delta-outer", "5", "--out", out],
        // Missing file.
        vec!["build", "--input", "/nonexistent/x.csv", "--k", "3", "--eps", "0.2", "--delta-main", "5", "--delta-outer", "5", "--out", out],
        // Unknown variant and malformed flag values.
        vec!["build", "--input", input, "--k", "3", "--eps", "0.2", "--delta-main", "5", "--delta-outer", "5", "--variant", "k3", "--out", out],
        vec!["build", "--input", input, "--k", "three", "--eps", "0.2", "--out", out],
        // Too few distinct points for k.
        vec!["inspect", "--input", input, "--k", "1000", "--eps", "0.2"],
    ];
    for args in cases {
        let result = kzcoreset(&args);
        assert_eq!(result.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&result.stderr));
    }
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "3\n0 1 2\n1 0 1\n2 1 5\n").unwrap();
    let result = kzcoreset(&["inspect", "--input", bad.to_str().unwrap(), "--format", "matrix_txt", "--k", "1", "--eps", "0.2"]);
    assert_eq!(result.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&result.stderr).contains("dist(2,2)"));
}

#[test]
fn exit_code_mapping() {
    use kz_coreset_cli::CliError;
    assert_eq!(CliError::from(kz_coreset::Error::Input("x".into())).exit_code(), 2);
    assert_eq!(CliError::from(kz_coreset::Error::Refused("x".into())).exit_code(), 2);
    assert_eq!(CliError::from(kz_coreset::Error::Invariant("x".into())).exit_code(), 3);
    assert_eq!(kz_coreset_cli::main_with_args(["kzcoreset", "--help"]), 0);
}

#[test]
fn k2_variant_builds() {
    let dir = tempfile::tempdir().unwrap();
    let input = small_csv(dir.path());
    let out = dir.path().join("k2.json");
    ok(&[
        "build", "--input", input.to_str().unwrap(), "--k", "3", "--eps", "0.2", "--delta-main", "10",
        "--delta-outer", "10", "--variant", "k2", "--out", out.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.contains("\"variant\": \"k2\""));
}
