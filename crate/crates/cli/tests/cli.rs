use std::process::{Command, Output};

use serde_json::Value;
use streetflow::streets::{street_triple, Street};
use streetflow::{FoliationSpec, Plane};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_streetflow")).args(args).output().expect("binary runs")
}

fn run_env(args: &[&str], key: &str, val: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_streetflow")).args(args).env(key, val).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

const SPEC: &str = r#"{"field": {"d": 2}, "a1": ["1/1", "1/2"], "b1": ["1/3", "1/1"],
  "a2": ["2/1", "1/3"], "b2": ["1/2", "1/2"], "m": ["1/5", "1/7"]}"#;

#[test]
fn streets_widths_match_the_library() {
    let out = run(&["streets", "--spec", SPEC]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    let spec = FoliationSpec::from_json_str(SPEC).unwrap();
    for (k, plane) in [Plane::One, Plane::Two].into_iter().enumerate() {
        let t = street_triple(&spec, plane).unwrap();
        for s in Street::ORDER {
            let got = &doc["planes"][k]["widths"][s.label().to_string()];
            assert_eq!(got.as_str().unwrap(), t.width(s).to_string());
        }
    }
}

#[test]
fn matrix_fiber_has_entry_sum_minus_two_members() {
    let out = run(&["matrix", "--entries", "2,1,1,1"]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["fiber"]["count"], 3);
    assert_eq!(doc["factorization"].as_array().unwrap().len(), 2);
}

#[test]
fn out_of_range_slit_is_a_validation_error() {
    let out = run(&["streets", "--spec", r#"{"a1": "1", "b1": "1", "a2": "1", "b2": "1", "m": "5"}"#]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["error"], "m_range");
}

#[test]
fn nongeneric_data_exits_with_two() {
    let out = run(&["transition", "--spec", r#"{"a1": "1", "b1": "1", "a2": "1", "b2": "1", "m": "1/2"}"#]);
    assert_eq!(code(&out), 2);
    assert_eq!(json(&out)["error"], "non_generic");
}

#[test]
fn depth_bound_comes_from_the_environment() {
    let out = run_env(&["words", "--seed", "4", "--depth", "3"], "STREETFLOW_MAX_DEPTH", "2");
    assert_eq!(code(&out), 3);
    assert_eq!(json(&out)["error"], "resource");
    let out = run_env(&["words", "--seed", "4", "--depth", "2"], "STREETFLOW_MAX_DEPTH", "2");
    assert_eq!(code(&out), 0);
}

#[test]
fn usage_errors_are_validation_errors() {
    let out = run(&["matrix", "--entries", "1,2"]);
    assert_eq!(code(&out), 1);
    let out = run(&["no-such-command"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["error"], "usage");
}

#[test]
fn seeded_runs_are_byte_identical() {
    let a = run(&["words", "--seed", "11", "--depth", "3"]);
    let b = run(&["words", "--seed", "11", "--depth", "3"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["words", "--seed", "12", "--depth", "3"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn outputs_with_a_spec_feed_back_unchanged() {
    for cmd in ["streets", "transition"] {
        let first = run(&[cmd, "--seed", "7"]);
        assert_eq!(code(&first), 0);
        let text = String::from_utf8(first.stdout.clone()).unwrap();
        let again = run(&[cmd, "--spec", &text]);
        assert_eq!(first.stdout, again.stdout, "{cmd}");
    }
}

#[test]
fn pi1_abelianization_matches_street_homology() {
    let words = json(&run(&["words", "--seed", "3", "--depth", "3"]));
    let letters = words["levels"][2]["words"][0]["letters"].as_str().unwrap().to_string();
    let doc = json(&run(&["pi1", "--seed", "3", "--word", &letters]));
    assert_eq!(doc["homology"], doc["street_homology"]);
    let neg = json(&run(&["pi1", "--seed", "3", "--word", &letters, "--negative"]));
    let flipped: Vec<i64> = doc["homology"].as_array().unwrap().iter().map(|v| -v.as_i64().unwrap()).collect();
    assert_eq!(neg["homology"], serde_json::json!(flipped));
}

#[test]
fn build_reports_the_first_violated_condition() {
    let bad = r#"{"tree": {"heights": ["0"], "edges": []}, "tori": []}"#;
    let out = run(&["build", "--spec", bad]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["error"], "tree");
}

#[test]
fn minimal_diagrams_round_trip_through_build() {
    let doc = json(&run(&["build", "--minimal", "3"]));
    let diagrams = doc["diagrams"].as_array().unwrap();
    let labels: Vec<&str> = diagrams.iter().map(|d| d["minimal_type"].as_str().unwrap()).collect();
    assert_eq!(labels, ["a", "c"]);
    for d in diagrams {
        let again = json(&run(&["build", "--spec", &d.to_string()]));
        assert_eq!(again["classification"], d["classification"]);
        assert_eq!(again["t"].as_i64().unwrap() - again["r"].as_i64().unwrap(), 2);
    }
}

#[test]
fn hyper_constant_forms() {
    let g3 = json(&run(&["hyper", "--roots=-4,-3,-2,-1,0,1,2,3", "--u", "1", "--v", "1"]));
    assert_eq!(g3["verdict"]["class"], "T2");
    let g2 = json(&run(&["hyper", "--roots=-3,-2,-1,0,1,2", "--u", "1", "--v", "1"]));
    assert_eq!(g2["verdict"]["class"], "T");
    let out = run(&["hyper", "--roots=-3,-2,-1,0,1,2", "--u", "0", "--v", "0"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn svg_outputs() {
    for args in [&["streets", "--seed", "1", "--format", "svg"][..], &["build", "--minimal", "4", "--format", "svg"]] {
        let out = run(args);
        assert_eq!(code(&out), 0);
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.starts_with("<svg") && text.trim_end().ends_with("</svg>"), "{args:?}");
    }
}

#[test]
fn simulation_agrees_with_the_oracle() {
    let doc = json(&run(&["simulate", "--seed", "2", "--points", "3", "--steps", "20"]));
    assert_eq!(doc["compared"], 60);
    assert_eq!(doc["agree"], 60);
    let out = run(&["simulate", "--seed", "2", "--points", "1000000"]);
    assert_eq!(code(&out), 3);
}
