use std::process::{Command, Output};

use serde_json::Value;

fn igusa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_igusa")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn full_run_passes() {
    let out = igusa(&["all", "--seed", "7", "--box", "4", "--trials", "20", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let doc = json(&out);
    assert_eq!(doc["summary"]["failed"], 0);
    assert_eq!(doc["summary"]["skipped"], 0);
    assert_eq!(doc["config"]["seed"], 7);
    let ids: Vec<&str> = doc["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn obstruction_reports_the_weights() {
    let out = igusa(&["obstruction"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let check = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["id"] == "obstruction.product-weights")
        .unwrap();
    assert_eq!(check["status"], "pass");
    let mut weights: Vec<i64> = check["actual"]
        .as_object()
        .unwrap()
        .values()
        .map(|w| w.as_str().unwrap().parse().unwrap())
        .collect();
    weights.sort();
    assert_eq!(weights, vec![4, 10, 30, 48]);
}

#[test]
fn zero_trials_skips_numerics() {
    let out = igusa(&["geometry", "--trials", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    for c in doc["checks"].as_array().unwrap() {
        let id = c["id"].as_str().unwrap();
        let numeric = ["geometry.rnc-fit", "geometry.on-quartic-root", "geometry.degree-16"].contains(&id);
        assert_eq!(c["status"], if numeric { "skipped" } else { "pass" }, "{id}");
    }
    assert_eq!(doc["summary"]["skipped"], 3);
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = ["geometry", "--seed", "11", "--trials", "8"];
    let (a, b) = (igusa(&args), igusa(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn markdown_follows_the_json() {
    let out = igusa(&["census", "--format", "md"]);
    assert_eq!(out.status.code(), Some(0));
    let md = String::from_utf8(out.stdout).unwrap();
    assert!(md.contains("| census.pairing-table | pass |"));
    assert!(md.contains("4 passed, 0 failed, 0 skipped"));
}

#[test]
fn writes_to_a_file() {
    let path = std::env::temp_dir().join(format!("igusa-report-{}.json", std::process::id()));
    let out = igusa(&["lifting", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["suite"], "lifting");
    std::fs::remove_file(path).ok();
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(igusa(&["all", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(igusa(&["nonsense"]).status.code(), Some(2));
    assert_eq!(igusa(&["census", "--terms", "3"]).status.code(), Some(2));
    assert_eq!(igusa(&["census", "--format", "xml"]).status.code(), Some(2));
}

#[test]
fn tight_oracle_tolerance_fails_with_witness() {
    let out = igusa(&["obstruction", "--tolerance", "1e-12"]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json(&out);
    let check = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["id"] == "obstruction.eisenstein-oracle")
        .unwrap();
    assert_eq!(check["status"], "fail");
    assert!(check["witness"].as_str().unwrap().starts_with("label"));
}
