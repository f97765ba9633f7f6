use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn cli(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_anoncover")).args(args).output().expect("binary runs");
    let code = out.status.code().expect("exit code");
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, json)
}

fn write_json(path: &Path, v: &Value) -> String {
    fs::write(path, serde_json::to_string(v).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn builtin_get_g1_has_five_arcs() {
    let (code, j) = cli(&["builtin", "get", "h-g1"]);
    assert_eq!(code, 0);
    assert_eq!(j["arcs"].as_array().unwrap().len(), 5);
    let (code, j) = cli(&["builtin", "list"]);
    assert_eq!(code, 0);
    assert!(j.as_array().unwrap().iter().any(|n| n == "fig1-total"));
}

#[test]
fn usage_errors_exit_three() {
    assert_eq!(cli(&["frobnicate"]).0, 3);
    assert_eq!(cli(&["simulate", "--graph", "builtin:k2"]).0, 3);
    assert_eq!(cli(&["simulate", "--protocol", "nope", "--graph", "builtin:k2"]).0, 3);
}

#[test]
fn unknown_builtin_lists_valid_names() {
    let (code, j) = cli(&["graph", "validate", "builtin:nope"]);
    assert_eq!(code, 1);
    assert!(j["error"].as_str().unwrap().contains("h-g4"));
}

#[test]
fn feasibility_exit_codes_and_witness_recheck() {
    assert_eq!(cli(&["feasible", "topology", "builtin:h-g4"]).0, 0);
    let (code, j) = cli(&["feasible", "spanning-tree", "builtin:c4"]);
    assert_eq!(code, 1);
    assert_eq!(j["decision"], "infeasible");
    let dir = tempfile::tempdir().unwrap();
    let w = &j["witnesses"][0];
    let base = write_json(&dir.path().join("base.json"), &w["base"]);
    let map = write_json(&dir.path().join("map.json"), &w["map"]);
    let (code, r) = cli(&["cover", "check", "--total", "builtin:c4", "--base", &base, "--map", &map]);
    assert_eq!(code, 0);
    assert_eq!(r["is_symmetric_covering"], true);
}

#[test]
fn lift_enumerate_output_feeds_lift_iso() {
    let (code, j) = cli(&["lift", "enumerate", "--base", "builtin:h-g1", "--sheets", "2", "--simple", "--connected"]);
    assert_eq!(code, 0);
    let lifts = j.as_array().unwrap();
    assert_eq!(lifts.len(), 1);
    let dir = tempfile::tempdir().unwrap();
    let f = write_json(&dir.path().join("lift.json"), &lifts[0]);
    assert_eq!(cli(&["lift", "iso", &f, "builtin:h-g4"]).0, 0);
    assert_eq!(cli(&["lift", "iso", &f, "builtin:c4"]).0, 1);
}

#[test]
fn cover_minimal_and_bases() {
    assert_eq!(cli(&["cover", "minimal", "builtin:p3"]).0, 0);
    let (code, j) = cli(&["cover", "minimal", "builtin:c4"]);
    assert_eq!(code, 1);
    assert!(j["witness"]["map"]["vmap"].is_array());
    let (code, j) = cli(&["cover", "bases", "builtin:c4"]);
    assert_eq!(code, 0);
    assert!(j["bases"].as_array().unwrap().len() >= 2);
}

#[test]
fn simulate_writes_trace_and_replays() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.jsonl");
    let t = trace.to_str().unwrap();
    let (code, j) = cli(&["simulate", "--protocol", "mazurkiewicz", "--graph", "builtin:k2", "--seed", "1", "--trace", t]);
    assert_eq!(code, 0);
    assert!(j["states"]["0"]["n"].is_number());
    let lines = fs::read_to_string(&trace).unwrap();
    assert!(lines.lines().all(|l| serde_json::from_str::<Value>(l).is_ok()));
    let (code, r) = cli(&["simulate", "--protocol", "mazurkiewicz", "--graph", "builtin:k2", "--replay", t]);
    assert_eq!(code, 0);
    assert_eq!(r["states"], j["states"]);
}

#[test]
fn simulate_composites() {
    let (code, j) = cli(&["simulate", "--protocol", "spanning-tree", "--graph", "builtin:p4", "--seed", "3"]);
    assert_eq!(code, 0);
    assert_eq!(j["result"]["valid"], true);
    let (code, _) = cli(&["simulate", "--protocol", "topology", "--graph", "builtin:h-g4", "--seed", "2", "--ports", "random"]);
    assert_eq!(code, 0);
    let (code, _) = cli(&["simulate", "--protocol", "election-tree", "--graph", "builtin:c4"]);
    assert_eq!(code, 1);
}

#[test]
fn batch_traces_replay_to_recorded_states() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (code, manifest) = cli(&["batch", "--graph", "builtin:c6", "--protocol", "election-tree", "--seeds", "0..4", "--out", out]);
    // c6 is not a tree.
    assert_eq!(code, 1);
    assert!(manifest["error"].is_string());

    let (code, manifest) = cli(&["batch", "--graph", "builtin:p4", "--protocol", "mazurkiewicz", "--seeds", "0..4", "--out", out]);
    assert_eq!(code, 0);
    let runs = manifest.as_array().unwrap();
    assert_eq!(runs.len(), 4);
    for r in runs {
        let seed = r["seed"].to_string();
        let trace = r["trace"].as_str().unwrap();
        let recorded: Value = serde_json::from_str(&fs::read_to_string(r["result"].as_str().unwrap()).unwrap()).unwrap();
        let (code, j) = cli(&[
            "simulate", "--protocol", "mazurkiewicz", "--graph", "builtin:p4", "--ports", "random", "--port-seed", &seed, "--replay",
            trace,
        ]);
        assert_eq!(code, 0);
        assert_eq!(j["states"], recorded["states"]);
    }
}

#[test]
fn yk_and_counterexample() {
    assert_eq!(cli(&["yk-check", "builtin:c6"]).0, 0);
    let (code, j) = cli(&["yk-check", "builtin:prism"]);
    assert_eq!(code, 1);
    assert!(j["witness"]["edges"].is_array());
    let (code, j) = cli(&["counterexample", "--degree", "3", "--max-n", "6"]);
    assert_eq!(code, 0);
    assert_eq!(j["pairs"].as_array().unwrap().len(), 0);
    let (code, j) = cli(&["counterexample", "--verify", "builtin:prism", "builtin:k33"]);
    assert_eq!(code, 1);
    assert_eq!(j["is_counterexample"], false);
}
