use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_picardlab")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../picardlab/tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

#[test]
fn identity_panel_passes() {
    let out = run(&["identity", "--qmax-norm", "40"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let checks = r["checks"].as_array().unwrap();
    assert!(checks.len() > 100);
    for c in checks {
        assert!(c["residual"].as_f64().unwrap() < 1e-6);
        assert_eq!(c["pass"], Value::Bool(true));
        assert!(!c["anchor"].as_str().unwrap().is_empty());
    }
}

#[test]
fn explicit_formula_with_empty_table() {
    let out = run(&["explicit-formula", "--X", "50", "--T", "7", "--eigenvalues", &fixture("empty_eigenvalues.txt")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["data"]["psi_approx"].as_f64(), Some(1250.0));
}

#[test]
fn explicit_formula_warns_outside_range() {
    let out = run(&["explicit-formula", "--X", "50", "--T", "20", "--eigenvalues", &fixture("synthetic_eigenvalues.txt")]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["warnings"].as_array().unwrap().len(), 1);
    assert_eq!(r["data"]["source"], "synthetic");
}

#[test]
fn rho_matches_exhaustion() {
    let out = run(&["rho", "--q", "2", "--n", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let expect = picardlab::congruence::rho(
        picardlab::GaussianInt::new(2, 0),
        picardlab::GaussianInt::new(-4, 0),
    )
    .unwrap()
    .count;
    assert_eq!(json(&out)["data"]["count"].as_u64(), Some(expect));
}

#[test]
fn output_is_deterministic() {
    let a = run(&["specfun-check", "--seed", "3"]);
    let b = run(&["specfun-check", "--seed", "3"]);
    assert_eq!(a.stdout, b.stdout);
    let one = Command::new(env!("CARGO_BIN_EXE_picardlab"))
        .args(["spectral-sum", "--T", "50", "--X", "7.3", "--eigenvalues", &fixture("synthetic_eigenvalues.txt")])
        .env("PICARDLAB_THREADS", "1")
        .output()
        .unwrap();
    let two = Command::new(env!("CARGO_BIN_EXE_picardlab"))
        .args(["spectral-sum", "--T", "50", "--X", "7.3", "--eigenvalues", &fixture("synthetic_eigenvalues.txt")])
        .env("PICARDLAB_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, two.stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["rho", "--q", "0", "--n", "1"]).status.code(), Some(2));
    assert_eq!(run(&["rho", "--q", "1+", "--n", "1"]).status.code(), Some(2));
    assert_eq!(run(&["kloosterman", "--m", "1"]).status.code(), Some(2));
    assert_eq!(run(&["spectral-sum", "--T", "5", "--X", "2"]).status.code(), Some(2));
    assert_eq!(run(&["geodesics", "--H", "12", "--X", "1000"]).status.code(), Some(2));
    assert_eq!(run(&["zeta", "--tolerance", "-1"]).status.code(), Some(2));
    // a tolerance nothing can meet turns passes into failures
    assert_eq!(run(&["zeta", "--tolerance", "1e-300"]).status.code(), Some(1));
}

#[test]
fn csv_splits_complex_values() {
    let out = run(&["kloosterman", "--m", "1", "--n", "2+i", "--c", "3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("command,name,anchor,key,re,im,residual,tolerance,pass"));
    let s_row = lines.find(|l| l.contains(",S,")).unwrap();
    assert!(s_row.starts_with("kloosterman,\"S(m,n;c)\",Weil bound,S,"), "{s_row}");
    // the quoted name holds one comma
    assert_eq!(s_row.split(',').count(), 10);
}

#[test]
fn geodesic_series() {
    let out = run(&["geodesics", "--H", "20", "--points", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let series = r["data"]["series"].as_array().unwrap();
    assert_eq!(series.len(), 5);
    let psi: Vec<f64> = series.iter().map(|p| p["psi_gamma"].as_f64().unwrap()).collect();
    assert!(psi.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(r["data"]["report"]["H"], 20);
}

#[test]
fn module_checks_pass() {
    for cmd in ["zeta", "lerch-fe", "specfun-check", "kloosterman"] {
        let out = run(&[cmd, "--qmax-norm", "10"]);
        assert_eq!(out.status.code(), Some(0), "{cmd}");
        assert_eq!(json(&out)["pass"], Value::Bool(true));
    }
}
