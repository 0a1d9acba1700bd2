use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn selfsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_selfsim"))
        .args(args)
        .env_remove("SELFSIM_CLOSURE_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_heisenberg3() {
    let out = selfsim(&["analyze", "heisenberg3"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["order"], 27);
    assert_eq!(v["exponent"], 3);
    assert_eq!(v["power_abelian"], true);
    let text = stdout(&selfsim(&["analyze", "heisenberg3", "--format", "text"]));
    assert!(text.contains("power_abelian true"));
}

#[test]
fn c4_search_is_exhausted_and_empty() {
    let out = selfsim(&["search-selfsim", "c4", "--all"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["endomorphisms"], Value::Array(vec![]));
    assert_eq!(v["exhausted"], true);
    assert_eq!(v["homs_examined"], 2);
    assert_eq!(v["self_similar"], "no");
}

#[test]
fn heisenberg3_search_lists_the_standard_map() {
    let v = json(&selfsim(&["search-selfsim", "heisenberg3"]));
    let endos = v["endomorphisms"].as_array().unwrap();
    assert_eq!(endos.len(), 648);
    assert!(endos
        .iter()
        .any(|e| e["generator_images"] == serde_json::json!(["a -> c", "c -> b"]) && e["simple"] == true));
}

#[test]
fn standard_automaton_matches_fixture() {
    let out = selfsim(&["emit-automaton", "heisenberg3", "--endo", "example23", "--format", "dot"]);
    assert!(out.status.success());
    let fixture = include_str!("fixtures/heisenberg3_standard.dot");
    assert_eq!(stdout(&out), fixture);
    for line in ["s0 [label=\"α|()\"];", "s1 [label=\"β|(0 1 2)\"];", "s2 [label=\"γ|()\"];"] {
        assert!(fixture.contains(line), "{line}");
    }
}

#[test]
fn act_on_words() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("h.json");
    let out = selfsim(&[
        "emit-automaton",
        "heisenberg3",
        "--endo",
        "example23",
        "--out",
        path(&file),
    ]);
    assert!(out.status.success());
    let act = |state: &str, word: &str| stdout(&selfsim(&["act", "--automaton", path(&file), "--state", state, "--word", word]));
    assert_eq!(act("β", "000"), "100\n");
    assert_eq!(act("γ", "000"), "010\n");
    assert_eq!(act("α", "120"), "111\n");
    assert_eq!(act("β", "0,1,2"), "1,1,2\n");
    let bad = selfsim(&["act", "--automaton", path(&file), "--state", "β", "--word", "3"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn export_then_load_keeps_numbering() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("m27.json");
    assert!(selfsim(&["catalog", "export", "m27", "--out", path(&file)]).status.success());
    let from_file = stdout(&selfsim(&["elements", path(&file)]));
    let from_catalog = stdout(&selfsim(&["elements", "m27"]));
    assert_eq!(from_file, from_catalog);
    assert_eq!(from_file.lines().count(), 27);
}

#[test]
fn theorem_checks_on_an_endomorphism_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("endo.json");
    std::fs::write(&file, r#"{"group": "heisenberg3", "H_gens": [1, 3], "images": [3, 2]}"#).unwrap();
    for theorem in ["1", "2", "split", "transfer", "restrict", "wreath"] {
        let out = selfsim(&["verify", "--theorem", theorem, "--group", "heisenberg3", "--endo", path(&file)]);
        assert_eq!(out.status.code(), Some(0), "{theorem}");
        assert_eq!(json(&out)["holds"], true, "{theorem}");
    }
    let out = selfsim(&["verify", "--theorem", "2", "--group", "heisenberg3", "--endo", path(&file)]);
    let check = &json(&out)["reports"][0]["checks"][0];
    assert_eq!(check["hypothesis_met"], true);
    assert_eq!(check["witness"], serde_json::json!([2]));
}

#[test]
fn wreath_of_c3() {
    let v = json(&selfsim(&["wreath", "c3"]));
    assert_eq!(v["order"], 81);
    assert_eq!(v["expected_order"], 81);
    assert_eq!(v["depth"], 2);
}

#[test]
fn error_classes_and_exit_codes() {
    let out = selfsim(&["analyze", "no_such_group"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[input]"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{").unwrap();
    let out = selfsim(&["elements", path(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[format]"));

    let out = selfsim(&["--closure-cap", "10", "analyze", "heisenberg3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[cap]"));

    let out = selfsim(&["search-selfsim"]);
    assert_eq!(out.status.code(), Some(2));

    let endo = dir.path().join("endo.json");
    std::fs::write(&endo, r#"{"group": "c4", "H_gens": [2], "images": [2]}"#).unwrap();
    let out = selfsim(&["verify", "--theorem", "1", "--group", "c4", "--endo", path(&endo)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn default_suite_has_no_violations() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("report.json");
    let out = selfsim(&["verify", "--suite", "default", "--out", path(&file)]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(v["summary"]["violations"], 0);
    assert_eq!(v["summary"]["errors"], 0);
    assert_eq!(v["groups"].as_array().unwrap().len(), 24);
}
