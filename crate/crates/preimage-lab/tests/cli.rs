//! End-to-end checks of the command-line contract: JSON shapes on stdout,
//! diagnostics on stderr, and the exit-status conventions (0 success,
//! 1 failed verification, 2 usage error).

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_preimage-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn square_class_labels() {
    let out = stdout_json(&run(&["xt-class", "-n", "3"]));
    assert_eq!(out, serde_json::json!({ "class": "minus_theta" }));
    let out = stdout_json(&run(&["xt-class", "-n", "0"]));
    assert_eq!(out, serde_json::json!({ "class": "trivial" }));
    let out = stdout_json(&run(&["xt-class", "-n", "-4"]));
    assert_eq!(out, serde_json::json!({ "class": "trivial" }));
}

#[test]
fn preimage_tree_shape() {
    let out = stdout_json(&run(&["preimages", "-d", "4", "-c", "-1"]));
    assert_eq!(out["d"], "4");
    assert_eq!(out["c"], "-1");
    assert_eq!(out["depth_limit"], "12");
    assert_eq!(out["truncated"], false);
    assert_eq!(out["union"], serde_json::json!(["-1", "0", "1"]));
}

#[test]
fn twist_point_listing() {
    let out = stdout_json(&run(&["cd-points", "-D", "1", "--height-bound", "100"]));
    assert_eq!(out["D"], "1");
    assert_eq!(out["bound"], "100");
    assert_eq!(out["points"].as_array().unwrap().len(), 6);
    assert_eq!(out["points"][0], serde_json::json!({ "x": "-1", "y": "-1" }));
    let pairs = out["delta_pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 6);
    assert_eq!(pairs[2]["delta_a"], "-theta");
    assert_eq!(pairs[2]["delta_b"], "-theta^3");

    let out = stdout_json(&run(&["cd-points", "-D", "-46", "--height-bound", "60"]));
    assert_eq!(out["points"], serde_json::json!([]));
}

#[test]
fn ideal_generators_as_text() {
    let out = run(&["curve-ideal", "-N", "3", "-a", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines,
        vec!["Z1^2 + Z1*W - Z2^2 - W^2", "Z1^2 + Z2*W - Z3^2 - W^2"]
    );
}

#[test]
fn scan_lists_solutions() {
    let out = stdout_json(&run(&["dm-search", "-n", "5", "--bound", "10"]));
    assert_eq!(out["n"], "5");
    assert_eq!(out["bound"], "10");
    let solutions = out["solutions"].as_array().unwrap();
    assert_eq!(solutions.len(), 6);
    assert!(solutions.iter().all(|s| s["trivial"] == true));
}

#[test]
fn verification_report_single_record() {
    let out = run(&["verify-paper", "--only", "discriminant"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["schema"], "1");
    let records = report["records"].as_array().unwrap();
    assert_eq!(records.len(), 1);
    assert_eq!(records[0]["id"], "discriminant");
    assert_eq!(records[0]["status"], "pass");
    assert_eq!(report["summary"]["pass"], "1");
    // progress lines are diagnostics and must stay off stdout
    assert!(String::from_utf8_lossy(&out.stderr).contains("discriminant"));
}

#[test]
fn verification_report_is_reproducible() {
    let strip_timing = |raw: &[u8]| -> serde_json::Value {
        let mut report: serde_json::Value = serde_json::from_slice(raw).unwrap();
        for record in report["records"].as_array_mut().unwrap() {
            record["elapsed_ms"] = "0".into();
        }
        report
    };
    let first = run(&["verify-paper", "--only", "point-table"]);
    let second = run(&["verify-paper", "--only", "point-table"]);
    assert!(first.status.success() && second.status.success());
    assert_eq!(strip_timing(&first.stdout), strip_timing(&second.stdout));
}

#[test]
fn usage_errors_exit_two() {
    let cases: &[&[&str]] = &[
        &["frobnicate"],
        &["preimages", "-d", "4", "-c", "-1", "--bogus"],
        &["preimages", "-d", "1", "-c", "0"],
        &["preimages", "-d", "4", "-c", "1//2"],
        &["cd-points", "-D", "3"],
        &["dm-search", "-n", "3"],
        &["dm-search", "-n", "40", "--bound", "50000"],
        &["verify-paper", "--only", "no-such-check"],
        &["xt-class", "-n", "129"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "args: {args:?}");
        assert!(out.stdout.is_empty(), "usage errors keep stdout clean: {args:?}");
    }
}
