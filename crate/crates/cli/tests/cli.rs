//! End-to-end runs of the `divsum` binary.

use std::process::{Command, Output};

use serde_json::Value;

fn divsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divsum")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn valence_of_delta() {
    let out = divsum(&["valence", "--eta", "1^24@1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["report"]["lhs"], "1");
    assert_eq!(v["report"]["rhs"], "1");
    assert_eq!(v["report"]["equal"], true);
}

#[test]
fn dit_case_passes() {
    let out = divsum(&["dit", "--D=5", "--Dp=-3", "--m=2", "--s=2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert!(v["report"]["rel_err"].as_f64().unwrap() < 1e-6);
}

#[test]
fn bklor11_m2() {
    let out = divsum(&["bklor11", "--m", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let row = &v["report"]["rows"][0];
    assert_eq!(row["rhs"], "-22");
    assert!((row["lhs"][0].as_f64().unwrap() + 22.0).abs() < 1e-4);
}

#[test]
fn qexp_rationals_are_strings() {
    let out = divsum(&["qexp", "j2", "--prec", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let c = v["report"]["series"]["coeffs"].as_array().unwrap();
    assert_eq!(c[0], "1");
    assert_eq!(c[2], "72");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(divsum(&["qexp", "E4", "--prec", "4"]).status.code(), Some(2));
    assert_eq!(divsum(&["nosuchcommand"]).status.code(), Some(2));
    assert_eq!(divsum(&["valence", "--eta", "garbage"]).status.code(), Some(2));
    assert_eq!(divsum(&["dit", "--D=6", "--Dp=-3"]).status.code(), Some(2));
    assert_eq!(divsum(&["dit", "--D=5", "--Dp=-3", "--tol", "0.5"]).status.code(), Some(2));
}

#[test]
fn failed_check_exits_1() {
    // Pointwise double-precision products cannot agree to 1e-13.
    let out = divsum(&["equivariance", "--d=-3", "--D=5", "--p=2", "--tol", "1e-13"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["ok"], false);
}

#[test]
fn identical_flags_give_identical_json() {
    let a = divsum(&["classgroup", "--disc=-84", "--D=21", "--seed", "3"]);
    let b = divsum(&["classgroup", "--disc=-84", "--D=21", "--seed", "3"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["report"]["class_number"], 4);
}

#[test]
fn table_output_and_plot() {
    let dir = std::env::temp_dir().join(format!("divsum-plot-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let svg = dir.join("zeros.svg");
    let out = divsum(&["zeros11", "--table", "--plot", svg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("zeros:"), "{text}");
    let s = std::fs::read_to_string(&svg).unwrap();
    assert!(s.contains("z+") && s.contains("z-"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn rohrlich_and_eisencase_report_fields() {
    let out = divsum(&["rohrlich", "--f", "E6"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for k in ["lhs", "rhs", "err", "cells_used", "runtime_ms"] {
        assert!(!v["report"][k].is_null(), "missing {k}");
    }
    let out = divsum(&["eisencase", "--d=-3", "--D=5", "--s=2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["report"]["err"].as_f64().unwrap() < 1e-3);
}

#[test]
fn threads_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_divsum"))
        .args(["trace", "--d=-3", "--D=5"])
        .env("DIVSUM_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["report"]["classes"].as_array().unwrap().len(), 2);
}
