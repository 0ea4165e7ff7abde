use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn wtp(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_wtp"));
    cmd.args(args).env_remove("WTP_BUDGET");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("wtp runs")
}

fn run_json(command: &str, cfg: &str, extra: &[&str]) -> (i32, Value) {
    let path = config(cfg);
    let mut args = vec![command, "--config", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = wtp(&args, &[]);
    let code = out.status.code().unwrap();
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, json)
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

#[test]
fn carpet_dimension() {
    let (code, r) = run_json("dimension", "carpet.json", &[]);
    assert_eq!(code, 0);
    let log3_2 = 2f64.ln() / 3f64.ln();
    let hd = num(&r["closed_form"]["hausdorff_dimension"]);
    assert!((hd - (1.0 + 2f64.powf(log3_2)).log2()).abs() < 1e-12);
    assert!((hd - 1.349).abs() < 1e-3);
    let md = num(&r["closed_form"]["minkowski_dimension"]);
    assert!((md - 1.369).abs() < 1e-3);
    assert_eq!(r["provenance"]["config"]["exponents"], "from-bases");
}

#[test]
fn sofic_entropy_reports_both_values() {
    let (code, r) = run_json("entropy", "sofic_golden.json", &[]);
    assert_eq!(code, 0);
    assert!((num(&r["closed_form"]["h_a_nats"]) - 1.4598).abs() < 5e-5);
    assert!((num(&r["closed_form"]["h_over_log_m1"]) - 2.1062).abs() < 5e-4);
    let warnings = r["warnings"].as_array().unwrap();
    assert!(warnings.iter().any(|w| w.as_str().unwrap().contains("ambiguity")));
}

#[test]
fn carpet_check_exits_zero() {
    let (code, r) = run_json("check", "carpet.json", &[]);
    assert_eq!(code, 0);
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn failing_check_exits_three() {
    // the sofic example violates the path/word ratio bound
    let (code, r) = run_json("check", "sofic_golden.json", &["--n-max", "6"]);
    assert_eq!(code, 3);
    let failed: Vec<&str> = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["path_word_ratio"]);
}

#[test]
fn unsupported_and_invalid_inputs_exit_one() {
    let (code, _) = run_json("variational", "sofic_golden.json", &[]);
    assert_eq!(code, 1);

    let dir = tempdir();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"system": {"sponge": {"bases": [2, 3], "digits": [[0,0]]}}, "exponents": [0.1, 0.2]}"#).unwrap();
    let out = wtp(&["entropy", "--config", bad.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exponent"));

    std::fs::write(&bad, "{ not json").unwrap();
    let out = wtp(&["entropy", "--config", bad.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(1));

    let out = wtp(&["entropy", "--config", "/nonexistent/wtp.json"], &[]);
    assert_eq!(out.status.code(), Some(1));
    let out = wtp(&["frobnicate", "--config", "x"], &[]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn budget_override_exits_two() {
    let path = config("sofic_golden.json");
    let out = wtp(&["estimate", "--config", path.to_str().unwrap()], &[("WTP_BUDGET", "1000")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
    let out = wtp(&["estimate", "--config", path.to_str().unwrap()], &[("WTP_BUDGET", "lots")]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn thread_count_does_not_change_the_report() {
    let path = config("sofic_golden.json");
    let p = path.to_str().unwrap();
    let one = wtp(&["estimate", "--config", p, "--n-max", "8", "--threads", "1"], &[]);
    let four = wtp(&["estimate", "--config", p, "--n-max", "8", "--threads", "4"], &[]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    let r: Value = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(r["estimate_series"]["entries"].as_array().unwrap().len(), 8);
    assert_eq!(r["provenance"]["config"]["estimator"]["n_max"], 8);
}

#[test]
fn echoed_config_reproduces_the_report() {
    let dir = tempdir();
    for (command, cfg) in [("estimate", "sofic_golden.json"), ("variational", "carpet.json")] {
        let path = config(cfg);
        let first = wtp(&[command, "--config", path.to_str().unwrap(), "--n-max", "5"], &[]);
        let r: Value = serde_json::from_slice(&first.stdout).unwrap();
        let echo = dir.join(format!("echo-{cfg}"));
        std::fs::write(&echo, r["provenance"]["config"].to_string()).unwrap();
        let second = wtp(&[command, "--config", echo.to_str().unwrap()], &[]);
        assert_eq!(first.stdout, second.stdout);
    }
}

#[test]
fn floats_carry_seventeen_digits() {
    let path = config("carpet.json");
    let out = wtp(&["dimension", "--config", path.to_str().unwrap()], &[]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("1.3496838201955774e0"), "{text}");
}

#[test]
fn table_format() {
    let path = config("sofic_golden.json");
    let out = wtp(&["estimate", "--config", path.to_str().unwrap(), "--n-max", "3", "--format", "table"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("estimate series"));
    assert_eq!(text.lines().filter(|l| l.trim_start().starts_with(char::is_numeric)).count(), 3);
}

fn tempdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("wtp-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
