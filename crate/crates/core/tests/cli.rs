use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entire-growth")).args(args).output().unwrap()
}

fn json_stdout(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn catalog_lists_sources() {
    let out = bin(&["catalog"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    let names: Vec<String> = v.as_array().unwrap().iter().map(|e| e["id"].as_str().unwrap().to_string()).collect();
    for want in ["sin", "exp", "maximal_type", "mittag_leffler"] {
        assert!(names.iter().any(|n| n == want), "{want} missing from {names:?}");
    }
}

#[test]
fn analyze_exp_regression() {
    let out = bin(&["analyze", "exp", "--method", "regression"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_stdout(&out);
    let order = v["results"]["order"].as_f64().unwrap();
    assert!((order - 1.0).abs() < 0.02, "{order}");
    assert!(v["config"].is_object());
    assert!(v["diagnostics"].is_array());
}

#[test]
fn analyze_polynomial_has_no_type() {
    let out = bin(&["analyze", "polynomial:coeffs=1;2;3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert_eq!(v["results"]["order"].as_f64(), Some(0.0));
    assert_eq!(v["results"]["type"], "undefined");
}

#[test]
fn subseq_identities_hold_at_a_zero() {
    let out = bin(&["subseq", "sin:lambda=1", "--nu", "even", "--z", "3.141592653589793", "--horizon", "200"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_stdout(&out);
    assert_eq!(v["results"]["identities"]["rho_ok"], true);
    assert_eq!(v["results"]["identities"]["tau_ok"], true);
}

#[test]
fn numeric_errors_exit_2() {
    assert_eq!(bin(&["analyze", "no_such_function"]).status.code(), Some(2));
    assert_eq!(bin(&["analyze", "sin", "--rho", "0"]).status.code(), Some(2));
}

#[test]
fn config_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("cfg.json");
    std::fs::write(&p, r#"{"command": "experiment", "experiment": "ae_order", "source": "sin", "nu": "even"}"#).unwrap();
    let out = bin(&["experiment", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("seed"));

    std::fs::write(&p, r#"{"command": "analyze", "source": "sin", "seed": 1, "bogus": 3}"#).unwrap();
    assert_eq!(bin(&["experiment", p.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn report_file_and_csv_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let csv = dir.path().join("r.csv");
    let out = bin(&["analyze", "sin:lambda=2", "--out", json.to_str().unwrap(), "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert!(v["results"]["order"].as_f64().unwrap() > 0.9);
    assert!(std::fs::read_to_string(&csv).unwrap().starts_with("n,term"));
}
