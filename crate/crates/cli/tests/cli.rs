use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn dimers(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dimers"))
        .args(args)
        .env("NO_COLOR", "1")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

#[test]
fn consistent_p2_prints_r_charge() {
    let out = dimers(&["consistent", "catalog:p2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "consistent");
    assert_eq!(v["r_charge"]["y2"], "2/3");
}

#[test]
fn inconsistent_example_exits_one() {
    let out = dimers(&["consistent", "catalog:example-inconsistent"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["verdict"], "inconsistent");
}

#[test]
fn verify_duality_dp3_prints_swapped_sequences() {
    let out = dimers(&["verify-duality", "catalog:dp3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["holds"], true);
    assert_eq!(v["mirror"]["a_sequence"], v["dimer"]["b_sequence"]);
}

#[test]
fn validate_names_the_broken_face() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.dimer");
    let text = dimers(&["catalog", "get", "p2"]).stdout;
    let text = String::from_utf8(text).unwrap().replace("face + x1 y2 z3", "face + x1 z3");
    fs::write(&path, text).unwrap();
    let out = dimers(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("face 0 (+ x1 z3)"), "{err}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(dimers(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(dimers(&["info", "catalog:nope"]).status.code(), Some(2));
    assert_eq!(dimers(&["census", "--polygon", "9z"]).status.code(), Some(2));
}

#[test]
fn genus_two_is_a_property_failure_for_polygons() {
    let out = dimers(&["info", "catalog:example-genus2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["genus"], 2);
    assert_eq!(dimers(&["polygon", "catalog:example-genus2"]).status.code(), Some(1));
}

#[test]
fn dual_then_dual_restores_the_polygon() {
    let dir = tempfile::tempdir().unwrap();
    let once = dir.path().join("once.dimer");
    let twice = dir.path().join("twice.dimer");
    assert!(dimers(&["dual", "catalog:dp1", "-o", once.to_str().unwrap()]).status.success());
    assert!(dimers(&["dual", once.to_str().unwrap(), "-o", twice.to_str().unwrap()]).status.success());
    let a = json(&dimers(&["polygon", "catalog:dp1"]));
    let b = json(&dimers(&["polygon", twice.to_str().unwrap()]));
    assert_eq!(a["label"], "4b");
    assert_eq!(a["label"], b["label"]);
}

#[test]
fn synth_from_sequence_file() {
    let dir = tempfile::tempdir().unwrap();
    let seq = dir.path().join("p2.seq");
    let out = dir.path().join("p2.dimer");
    fs::write(&seq, "# O, O(1), O(2)\n0 0 0\n1 0 0\n0 1 1\n").unwrap();
    let run = dimers(&[
        "synth",
        "--polygon",
        "3a",
        "--sequence",
        seq.to_str().unwrap(),
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    let v = json(&dimers(&["info", out.to_str().unwrap()]));
    assert_eq!((v["vertices"].clone(), v["arrows"].clone()), (3.into(), 9.into()));
}

#[test]
fn reports_are_identical_across_executors() {
    for args in [
        vec!["matchings", "catalog:dp2"],
        vec!["sequences", "catalog:dp3"],
        vec!["census", "--polygon", "4c"],
    ] {
        let mut seq = args.clone();
        seq.push("--sequential");
        assert_eq!(dimers(&args).stdout, dimers(&seq).stdout, "{args:?}");
    }
}

#[test]
fn matchings_stable_filter_and_root() {
    let all = json(&dimers(&["matchings", "catalog:p1xp1"]));
    let stable = json(&dimers(&["matchings", "catalog:p1xp1", "--stable", "--root", "2"]));
    assert_eq!(all["count"], 8);
    assert_eq!(stable["matchings"].as_array().unwrap().len(), 5);
    assert_eq!(stable["root"], "2");
    assert_eq!(dimers(&["matchings", "catalog:p1xp1", "--root", "x"]).status.code(), Some(2));
}

#[test]
fn render_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("dp3.svg");
    let out = dimers(&["render", "catalog:dp3", "--svg", svg.to_str().unwrap(), "--matching", "0"]);
    assert!(out.status.success());
    let text = fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.trim_end().ends_with("</svg>"));
    let bad = dimers(&["render", "catalog:dp3", "--svg", svg.to_str().unwrap(), "--matching", "999"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn properties_are_seeded() {
    let a = dimers(&["properties", "catalog:dp1", "--seed", "5", "--samples", "50"]);
    let b = dimers(&["properties", "catalog:dp1", "--seed", "5", "--samples", "50"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["seed"], 5);
}

#[test]
fn catalog_lists_dimers_and_polygons() {
    let v = json(&dimers(&["catalog", "list"]));
    assert_eq!(v["polygons"].as_array().unwrap().len(), 16);
    assert!(v["dimers"].as_array().unwrap().iter().any(|n| n == "census-8c-1"));
    let p = json(&dimers(&["catalog", "get", "6a"]));
    assert_eq!(p["a_sequence"], serde_json::json!([-1, -1, -1, -1, -1, -1]));
}
