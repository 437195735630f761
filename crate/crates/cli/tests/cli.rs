use std::process::{Command, Output};

use serde_json::Value;
use slotchain_core::{cert, config};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slotchain")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

const H_H_F3: &str = r#"{"field":{"kind":"GF","p":3,"k":1},"symbols":[{"a":"-1","b":"-1"},{"a":"-1","b":"-1"}]}"#;

fn unit(i: usize) -> String {
    let v: Vec<&str> = (0..16).map(|k| if k == i { "1" } else { "0" }).collect();
    serde_json::to_string(&v).unwrap()
}

fn chain_args(x: &str, xp: &str) -> Vec<String> {
    ["algebra", "chain", "--presentation", H_H_F3, "--x", x, "--xprime", xp].iter().map(|s| s.to_string()).collect()
}

fn run_owned(args: &[String]) -> Output {
    run(&args.iter().map(String::as_str).collect::<Vec<_>>())
}

#[test]
fn isotropic_hyperbolic_plane_has_witness() {
    let o = run(&["form", "isotropic", "--form", r#"{"diag":["1","-1"]}"#]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["isotropic"], true);
    assert_eq!(v["witness"].as_array().unwrap().len(), 2);
}

#[test]
fn hamilton_quaternions_are_division_by_local_global() {
    let o = run(&["quat", "division", "--symbol", r#"{"char2":false,"a":"-1","b":"-1"}"#]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["division"], true);
    assert_eq!(v["method"], "hasse-minkowski");
}

#[test]
fn split_symbol_exits_false() {
    let o = run(&["quat", "division", "--json", r#"{"a":"1","b":"-1"}"#]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["division"], false);
}

#[test]
fn chain_certificate_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("chain.json");
    let mut args = chain_args(&unit(1), &unit(4));
    args.extend(["--out".to_string(), path.display().to_string()]);
    let o = run_owned(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["verify", "chain", "--cert", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["valid"], true);
}

#[test]
fn tampered_certificate_names_identity() {
    let o = run_owned(&chain_args(&unit(1), &unit(4)));
    let cert = json(&o);
    let mut rng = config::rng(7);
    let bad = cert::tamper(&cert, &mut rng).expect("chain has claimed scalars");
    let o = run(&["verify", "chain", "--cert", &bad.to_string()]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["valid"], false);
    assert!(!v["failed_identity"].as_str().unwrap().is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("identity fails"));
}

#[test]
fn output_is_deterministic() {
    let args = chain_args(&unit(1), &unit(6));
    let a = run_owned(&args);
    let b = run_owned(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn slot_chain_certificate_round_trips() {
    let o = run(&["quat", "chain", "--left", H_H_F3, "--right", H_H_F3]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["kind"], "slot-chain");
    let o = run(&["verify", "chain", "--cert", &v.to_string()]);
    assert_eq!(code(&o), 0);
}

#[test]
fn malformed_json_is_input_error_with_location() {
    let o = run(&["form", "invariants", "--form", r#"{"diag": ["1", }"#]);
    assert_eq!(code(&o), 3);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 1, column"), "{err}");
}

#[test]
fn contract_violations_are_input_errors() {
    let o = run(&["form", "invariants", "--form", r#"{"diag":["1","0"]}"#]);
    assert_eq!(code(&o), 3);
    let o = run(&["verify", "suite", "no-such-suite"]);
    assert_eq!(code(&o), 3);
    let o = run(&["form", "frobnicate"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn nontrivial_discriminant_has_no_extraction() {
    let o = run(&["clifford", "extract-e", "--form", r#"{"diag":["1","1"]}"#]);
    assert_eq!(code(&o), 1);
}

#[test]
fn extraction_recognizes_hamilton() {
    let o = run(&["clifford", "extract-e", "--form", r#"{"diag":["1","1","1","1"]}"#]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["algebra"]["dim"], 4);
    assert_eq!(v["quaternion"]["a"], "-1");
}

#[test]
fn clifford_build_verifies_relations() {
    let o = run(&["clifford", "build", "--form", r#"{"char2":true,"pairs":[["0","0"]]}"#]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["verification"]["relations"], true);
}

#[test]
fn suite_runs_by_name() {
    let o = run(&["verify", "suite", "witt"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("[PASS]"));
}
