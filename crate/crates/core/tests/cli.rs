use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_robust-lexrank"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn normalized(doc: &Value) -> Vec<f64> {
    doc["ranks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["normalized"].as_f64().unwrap())
        .collect()
}

#[test]
fn similarity_writes_matrix_and_prints_size() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("one.txt");
    let output = dir.path().join("sim.csv");
    fs::write(&input, "A single sentence.\n").unwrap();
    let out = bin(&[
        "similarity",
        "--input",
        input.to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1");
    assert_eq!(
        fs::read_to_string(&output).unwrap().trim(),
        "1.0000000000000000e0"
    );
}

#[test]
fn similarity_of_news_cluster_is_11_by_11() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("news.tsv");
    fs::write(&input, robust_lexrank::fixtures::NEWS_CLUSTER_TSV).unwrap();
    let out = bin(&["similarity", "--input", input.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 11);
    assert!(text.lines().all(|l| l.split(',').count() == 11));
}

#[test]
fn empty_input_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("empty.txt");
    fs::write(&input, "").unwrap();
    let out = bin(&["similarity", "--input", input.to_str().unwrap()]);
    assert!(!out.status.success());
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn rank_at_0_3_is_all_ones() {
    let doc = json(&bin(&["rank", "--threshold", "0.3"]));
    assert!(normalized(&doc).iter().all(|v| (v - 1.0).abs() <= 1e-9));
    assert_eq!(doc["config"]["threshold"], 0.3);
}

#[test]
fn robust_large_budget_at_0_1_is_all_ones() {
    let doc = json(&bin(&[
        "robust",
        "--threshold",
        "0.1",
        "--eps1",
        "10",
        "--eps-col",
        "10",
    ]));
    assert!(normalized(&doc).iter().all(|v| (v - 1.0).abs() <= 5e-4));
    assert!(doc["objective"].as_f64().is_some());
    assert_eq!(doc["config"]["eps1"], 10.0);
}

#[test]
fn per_column_budget_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("eps.csv");
    fs::write(&file, "0.5\n".repeat(11)).unwrap();
    let doc = json(&bin(&[
        "robust",
        "--threshold",
        "0.1",
        "--eps1",
        "0.5",
        "--eps-col-file",
        file.to_str().unwrap(),
    ]));
    assert_eq!(doc["config"]["eps_col"].as_array().unwrap().len(), 11);
    fs::write(&file, "0.5\n0.5\n").unwrap();
    let out = bin(&[
        "robust",
        "--threshold",
        "0.1",
        "--eps-col-file",
        file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(9));
}

#[test]
fn csv_format_echoes_config() {
    let out = bin(&["robust", "--threshold", "0.2", "--format", "csv"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("# threshold: 0.2"));
    assert!(text.contains("# objective: "));
    assert!(text.contains("id,score,normalized\nd1s1,"));
}

#[test]
fn comparative_defaults_to_templates() {
    let doc = json(&bin(&["comparative", "--threshold", "0.1"]));
    let raw: Vec<f64> = doc["raw"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(raw.len(), 21);
    assert!(raw[..11].iter().all(|v| *v == 1.0));
    assert!(raw[11..].iter().all(|v| (0.0..=1.0).contains(v)));
}

#[test]
fn comparative_needs_a_split() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("c.txt");
    fs::write(&input, "alpha beta\nbeta gamma\n").unwrap();
    let out = bin(&[
        "comparative",
        "--threshold",
        "0.1",
        "--input",
        input.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let doc = json(&bin(&[
        "comparative",
        "--threshold",
        "0.0",
        "--input",
        input.to_str().unwrap(),
        "--n-verified",
        "1",
    ]));
    assert_eq!(doc["config"]["n_verified"], 1);
}

#[test]
fn simulate_is_deterministic() {
    let a = bin(&["simulate", "--samples", "100", "--seed", "7"]);
    let b = bin(&["simulate", "--samples", "100", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let doc = json(&a);
    assert_eq!(doc["report"]["violations"], 0);
    assert_eq!(doc["report"]["seed"], 7);
}

#[test]
fn bad_threshold_has_its_own_exit_code() {
    let out = bin(&["rank", "--threshold", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = bin(&["rank", "--threshold", "0.1", "--input", "/nonexistent/file"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn reproduce_tables_structure() {
    let doc = json(&bin(&["reproduce-tables"]));
    let columns = doc["report"]["columns"].as_array().unwrap();
    assert_eq!(columns.len(), 18);
    for c in columns {
        assert_eq!(c["ours"].as_array().unwrap().len(), 11);
        if c["threshold"] == 0.3 {
            assert!(c["deviation"]
                .as_array()
                .unwrap()
                .iter()
                .all(|d| d.as_f64().unwrap() <= 1e-9));
        }
    }
    let csv = bin(&["reproduce-tables", "--format", "csv"]);
    let text = String::from_utf8_lossy(&csv.stdout);
    assert_eq!(text.lines().count(), 12);
    assert_eq!(text.lines().next().unwrap().split(',').count(), 1 + 18 * 3);
}

#[test]
fn verify_suite_passes() {
    let doc = json(&bin(&["verify"]));
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["checks"].as_array().unwrap().len(), 4);
}
