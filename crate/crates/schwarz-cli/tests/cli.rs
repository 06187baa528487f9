// SPDX-License-Identifier: MIT OR Apache-2.0
//! The `schwarz` binary: exit codes, output format and subcommands.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

fn schwarz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schwarz")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}\n{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn empty_scenario_gives_empty_report() {
    let out = schwarz(&["scenario", "run", corpus("empty.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["steps"], Value::Array(vec![]));
    assert_eq!(v["passed"], Value::Bool(true));
}

#[test]
fn a4_scenario_passes_and_is_deterministic() {
    let path = corpus("a4.json");
    let first = schwarz(&["scenario", "run", path.to_str().unwrap()]);
    let second = schwarz(&["scenario", "run", path.to_str().unwrap()]);
    assert_eq!(code(&first), 0, "{}", String::from_utf8_lossy(&first.stderr));
    assert_eq!(first.stdout, second.stdout);
    let v = json_of(&first);
    let ops: Vec<&str> = v["steps"].as_array().unwrap().iter().map(|s| s["op"].as_str().unwrap()).collect();
    assert_eq!(ops, ["group-check", "invariants-check", "build-system", "derive-ode", "residual", "numeric-check"]);
    assert_eq!(v["steps"][1]["result"]["degrees"], serde_json::json!([6, 8]));
}

#[test]
fn keys_are_sorted() {
    let out = schwarz(&["group", "check", corpus("groups/hesse.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let keys: Vec<&str> = text
        .lines()
        .filter_map(|l| l.trim().strip_prefix('"'))
        .filter_map(|l| l.split('"').next())
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(text.contains("\"order\": 27"));
}

#[test]
fn failed_comparison_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wrong.json");
    let manifest = r#"{
        "name": "wrong",
        "steps": [
            {"op": "pullback", "variable": "t", "equation": ["-11/900/(t*(4*t-27))", "2/3*(7*t-27)/(t*(4*t-27))"],
             "map": "27/4*t", "expect": ["-11/3600/(t*(t-1))", "1/6*(7*t-5)/(t*(t-1))"]}
        ]
    }"#;
    std::fs::write(&path, manifest).unwrap();
    let out = schwarz(&["scenario", "run", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let v = json_of(&out);
    assert_eq!(v["steps"][0]["status"], "fail");
    assert_eq!(v["steps"][0]["checks"]["equation"], false);
}

#[test]
fn step_errors_carry_the_step() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let manifest = r#"{
        "name": "bad",
        "steps": [
            {"op": "pullback", "variable": "t", "equation": ["1/t", "0"], "map": "t^2"},
            {"op": "pullback", "variable": "t", "equation": ["1/t +* 2", "0"], "map": "t"},
            {"op": "pullback", "variable": "t", "equation": ["1/t", "0"], "map": "t"}
        ]
    }"#;
    std::fs::write(&path, manifest).unwrap();
    let out = schwarz(&["scenario", "run", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let v = json_of(&out);
    let steps = v["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 2);
    assert_eq!(steps[0]["status"], "done");
    assert_eq!(steps[1]["status"], "error");
    let msg = steps[1]["error"].as_str().unwrap();
    assert!(msg.starts_with("step 1 (pullback): syntax error at line 1, column"), "{msg}");
}

#[test]
fn malformed_manifest_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, r#"{"name": "broken", "steps": [{"op": "no-such-op"}]}"#).unwrap();
    let out = schwarz(&["scenario", "run", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("manifest"));
}

#[test]
fn parse_prints_canonical_forms() {
    let out = schwarz(&["parse", "X1^3+X2^3+X3^3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json_of(&out)["canonical"], "X1^3 + X2^3 + X3^3");
    let out = schwarz(&["parse", "0"]);
    assert_eq!(json_of(&out)["canonical"], "0");
    let out = schwarz(&["parse", "--kind", "ratfn", "--symbols", "t", "(t^2-1)/(t-1)"]);
    assert_eq!(json_of(&out)["canonical"], "t + 1");
    let out = schwarz(&["parse", "--kind", "radical", "--symbols", "t", "t^(1/3)*(t-1)^(1/3)"]);
    assert_eq!(code(&out), 0);
    let out = schwarz(&["parse", "X1 +* X2"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1, column 5"));
    let out = schwarz(&["parse", "Y1"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown variable `Y1`"));
}

#[test]
fn transforms_from_the_command_line() {
    let out = schwarz(&[
        "transform",
        "conjugate",
        "--coeff",
        "21/100*(t^2-t+1)/(t^2*(t-1)^2)",
        "--coeff",
        "0",
        "--factor",
        "t^(-1/3)*(t-1)^(-1/3)",
    ]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    let coeffs = &v["steps"][0]["result"]["equation"]["coefficients"];
    assert_eq!(coeffs[1], "(4/3*t - 2/3)/(t^2 - t)");
    let out = schwarz(&["transform", "pullback", "--coeff", "0", "--coeff", "1/t", "--map", "t^2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json_of(&out)["steps"][0]["result"]["equation"]["coefficients"][1], "(1)/(t)");
}

#[test]
fn scenario_subcommands() {
    let a4 = corpus("a4.json");
    let a4 = a4.to_str().unwrap();
    let out = schwarz(&["invariants", "check", a4]);
    assert_eq!(code(&out), 0);
    let out = schwarz(&["dynsys", "build", a4, "--system", "flow", "--equivariance", "exact"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json_of(&out)["steps"][0]["checks"]["equivariant"], true);
    let out = schwarz(&["derive", a4, "--variable", "t"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json_of(&out)["steps"][0]["result"]["equation"]["order"], 2);
    let out = schwarz(&["witness", a4]);
    assert_eq!(code(&out), 0);
    let out = schwarz(&["dynsys", "build", a4, "--system", "missing"]);
    assert_eq!(code(&out), 1);
    assert!(json_of(&out)["steps"][0]["error"].as_str().unwrap().contains("unknown system `missing`"));
}

#[test]
fn numcheck_writes_a_trace() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a4.json");
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(corpus("a4.json")).unwrap()).unwrap();
    v["group"] = Value::String(corpus("groups/binary_tetrahedral.json").to_str().unwrap().into());
    let steps = v["steps"].as_array_mut().unwrap();
    steps.last_mut().unwrap()["trace"] = Value::String("orbit.csv".into());
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
    let out = schwarz(&["numcheck", path.to_str().unwrap(), "--trace-dir", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let report = json_of(&out);
    assert_eq!(report["steps"].as_array().unwrap().len(), 1);
    let csv = std::fs::read_to_string(dir.path().join("orbit.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "t_re,t_im,X1_re,X1_im,X2_re,X2_im,drift_P1,drift_P2");
    let rows: Vec<&str> = lines.collect();
    assert!(rows.len() > 2);
    for row in rows {
        let drift: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
        assert!(drift < 1e-8);
    }
}

#[test]
fn parallel_runs_match_sequential_ones() {
    let paths = [corpus("a4.json"), corpus("empty.json"), corpus("pepin.json")];
    let args: Vec<&str> = paths.iter().map(|p| p.to_str().unwrap()).collect();
    let mut seq = vec!["scenario", "run"];
    seq.extend(&args);
    let mut par = seq.clone();
    par.extend(["--jobs", "3"]);
    let a = schwarz(&seq);
    let b = schwarz(&par);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let v = json_of(&b);
    let names: Vec<&str> = v["reports"].as_array().unwrap().iter().map(|r| r["scenario"].as_str().unwrap()).collect();
    assert_eq!(names, ["a4", "empty", "pepin"]);
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.json");
    let out = schwarz(&["scenario", "run", corpus("empty.json").to_str().unwrap(), "--out", target.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(target).unwrap()).unwrap();
    assert_eq!(v["scenario"], "empty");
}
