use std::path::PathBuf;
use std::process::{Command, Output};

use condembed_core::io::read_matrix_file;
use condembed_core::{conditional_transition_matrix, validate_stochastic, IntensityMatrix};

fn data(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "data", name].iter().collect();
    path.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_condembed"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn j1_on_identity_succeeds() {
    let o = run(&["j1", "--input", &data("identity3.csv")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("closed_form"), "{text}");
    assert!(text.contains("0.0000"));
}

#[test]
fn compare_on_credit_matrix_prefers_j1() {
    let o = run(&["compare", "--input", &data("credit8.csv")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("J1 generator is closer"), "{}", stdout(&o));
}

#[test]
fn compare_on_two_state_prefers_j1() {
    let o = run(&["compare", "--input", &data("two_state_p040.csv")]);
    assert!(stdout(&o).contains("J1 generator is closer"));
}

#[test]
fn zero_diagonal_exits_with_code_3() {
    let o = run(&["j1", "--input", &data("zero-diag.csv")]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}

#[test]
fn iteration_cap_exits_with_code_2() {
    let o = run(&["j1", "--input", &data("credit8.csv"), "--max-iter", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_input_exits_with_code_1() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "0.5,0.5\n0.5,abc\n").unwrap();
    let o = run(&["j1", "--input", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["j1", "--input", &data("does-not-exist.csv")]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["j1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn json_report_has_expected_keys() {
    let o = run(&["j1", "--input", &data("credit8.csv"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for key in ["method", "generator", "theta", "iterations", "residual", "contraction"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    for key in ["alpha", "C_alpha", "K"] {
        assert!(v["contraction"].get(key).is_some(), "missing contraction.{key}");
    }
    assert_eq!(v["method"], "fixed_point");
    assert_eq!(v["generator"].as_array().unwrap().len(), 8);
    assert!(v["contraction"]["K"].as_f64().unwrap() < 1.0);
}

#[test]
fn csv_output_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let q_path = dir.path().join("q.csv");
    let o = run(&[
        "j1",
        "--input",
        &data("credit8.csv"),
        "--format",
        "csv",
        "--output",
        q_path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let q = IntensityMatrix::try_from(read_matrix_file(&q_path).unwrap()).unwrap();
    let p = validate_stochastic(&read_matrix_file(data("credit8.csv")).unwrap().to_rows()).unwrap();
    let back = conditional_transition_matrix(&q);
    assert!(back.as_matrix().max_abs_diff(p.as_matrix()).unwrap() < 1e-9);

    let o = run(&["verify", "--input-p", &data("credit8.csv"), "--input-q", q_path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("max |P^(N<=1)(Q) - P|"));
}

#[test]
fn output_without_format_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = run(&["j1", "--input", &data("two_state_p090.csv"), "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["method"], "closed_form");
}

#[test]
fn jlt_prints_generator() {
    let o = run(&["jlt", "--input", &data("credit8.csv"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<Vec<f64>> = serde_json::from_slice(&o.stdout).unwrap();
    assert!((rows[0][0] - (-0.1154)).abs() < 2e-4);
}

#[test]
fn check_reports_screens() {
    let o = run(&["check", "--input", &data("three_state_p060.csv")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("J1-embeddable: yes"), "{text}");
    assert!(text.contains("diagonal bounds"));
    let o = run(&["check", "--input", &data("zero-diag.csv")]);
    assert!(stdout(&o).contains("J1-embeddable: no"));
}

#[test]
fn simulate_emits_json() {
    let dir = tempfile::tempdir().unwrap();
    let q_path = dir.path().join("q.csv");
    std::fs::write(&q_path, "-1,1\n1,-1\n").unwrap();
    let o = run(&["simulate", "--input-q", q_path.to_str().unwrap(), "--paths", "20000", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["total_paths"], 40000);
    let f = v["conditional_freq"][0][1].as_f64().unwrap();
    assert!((f - 0.5).abs() < 0.02);
    let o = run(&["simulate", "--input-q", q_path.to_str().unwrap(), "--paths", "10"]);
    assert_eq!(o.status.code(), Some(1));
}
