//! The binary end to end: exit codes, report files and determinism.

use std::process::{Command, Output};

fn dhmaps(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dhmaps")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn list_cases_names_every_case() {
    let o = dhmaps(&["list-cases"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    for name in ["theorem3", "theorem3-broken-d0", "example1", "example2", "example3"] {
        assert!(text.lines().any(|l| l.split_whitespace().next() == Some(name)), "{name}");
    }
}

#[test]
fn verify_writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = dhmaps(&["verify", "--case", "example2", "--grid", "4x4", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    for key in ["case", "params", "grid", "fd_step", "residuals", "criteria", "wall_time_ms"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["grid"]["counts"], serde_json::json!([4, 4]));
    assert_eq!(v["params"]["p"], 1);
    assert!(v["criteria"]["twistor"].as_bool().unwrap());
    let r = &v["residuals"]["el_spinor"];
    assert!(r["max"].as_f64().unwrap() <= r["tol"].as_f64().unwrap());
}

#[test]
fn failing_residuals_exit_1() {
    let o = dhmaps(&["verify", "--case", "example1-literal", "--grid", "3x3", "--json"]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"], "fail");
}

#[test]
fn configuration_problems_exit_2() {
    assert_eq!(code(&dhmaps(&["verify", "--case", "unknown"])), 2);
    assert_eq!(code(&dhmaps(&["verify", "--case", "example1", "--fd-step", "1e-9"])), 2);
    assert_eq!(code(&dhmaps(&["verify", "--case", "example1", "--params", "/nonexistent.toml"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("missing").join("r.json");
    assert_eq!(code(&dhmaps(&["verify", "--case", "example1", "--grid", "3x3", "--out", out.to_str().unwrap()])), 2);
}

#[test]
fn rejected_parameters_name_the_condition() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.toml");
    std::fs::write(&p, "d = [[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]]\n").unwrap();
    let o = dhmaps(&["verify", "--case", "theorem3", "--params", p.to_str().unwrap(), "--json"]);
    assert_eq!(code(&o), 2);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"], "invalid");
    assert!(v["error"].as_str().unwrap().contains("d_0"));
}

#[test]
fn params_file_changes_the_case() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.toml");
    std::fs::write(&p, "n = 4\n").unwrap();
    let o = dhmaps(&["verify", "--case", "example3", "--grid", "3", "--params", p.to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["grid"]["counts"], serde_json::json!([3, 3, 3, 3]));
    assert_eq!(v["params"]["n"], 4);
}

#[test]
fn properties_are_deterministic() {
    let a = dhmaps(&["properties", "--seed", "5", "--trials", "10", "--json"]);
    let b = dhmaps(&["properties", "--seed", "5", "--trials", "10", "--json"]);
    assert_eq!(a.stdout, b.stdout);
    let one = dhmaps(&["properties", "--trials", "1", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(v["properties"]["skew_symmetry"]["samples"], 1);
    assert_eq!(code(&dhmaps(&["properties", "--trials", "0"])), 2);
}

#[test]
fn convergence_needs_three_steps() {
    let o = dhmaps(&["convergence", "--case", "example1", "--fd-step", "1e-2", "--fd-step", "1e-3"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn convergence_of_a_harmonic_case() {
    let o = dhmaps(&[
        "convergence", "--case", "example1", "--grid", "3x3", "--fd-step", "1e-2", "--fd-step", "3e-3", "--fd-step", "1e-3",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let order = v["residuals"]["el_spinor"]["order"].as_f64().unwrap();
    assert!(order > 1.8, "{order}");
    assert_eq!(code(&o), 0);
}

#[test]
fn verify_reports_differ_only_in_wall_time() {
    let run = || {
        let o = dhmaps(&["verify", "--case", "example2", "--grid", "4x4", "--seed", "3", "--json"]);
        let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert!(v.as_object_mut().unwrap().remove("wall_time_ms").is_some());
        v
    };
    assert_eq!(run(), run());
}
