//! End-to-end tests of the `sosi` binary: subcommands, report formats,
//! and exit codes (0 ok, 1 violation, 2 usage/parse, 3 size bound).

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const EX1: &str = r#"{
  "n": 3,
  "name": "ex1",
  "p": ["3", "1", "1"],
  "sigma0": [1, 2, 3],
  "w": ["1", "1", "3"]
}
"#;

fn sosi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sosi"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_ex1(dir: &Path) -> String {
    let path = dir.join("ex1.json");
    std::fs::write(&path, EX1).unwrap();
    path.to_str().unwrap().to_string()
}

fn json_stdout(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON report")
}

#[test]
fn value_greedy_and_brute() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_ex1(dir.path());

    let out = sosi(&["value", "--instance", &path, "--coalition", "1,3", "--json"]);
    let report = json_stdout(&out);
    assert_eq!(report["value"], "7");
    assert_eq!(report["order"], serde_json::json!([2, 3, 1]));
    assert_eq!(report["coalition"], serde_json::json!([1, 3]));

    let out = sosi(&[
        "value", "--instance", &path, "--coalition", "1,2,3", "--method", "brute", "--json",
    ]);
    assert_eq!(json_stdout(&out)["value"], "12");

    // empty coalition spec means the empty coalition
    let out = sosi(&["value", "--instance", &path, "--coalition", "", "--json"]);
    assert_eq!(json_stdout(&out)["value"], "0");

    // human rendering shows the same number
    let out = sosi(&["value", "--instance", &path, "--coalition", "1,3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("value: 7"), "{text}");
}

#[test]
fn value_with_trace() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_ex1(dir.path());
    let out = sosi(&[
        "value", "--instance", &path, "--coalition", "all", "--trace", "--json",
    ]);
    let report = json_stdout(&out);
    let steps = report["trace"].as_array().unwrap();
    assert_eq!(steps.len(), 3);
    // players from latest to earliest under sigma0
    assert_eq!(steps[0]["player"], 3);
    assert_eq!(steps[2]["player"], 1);
    assert_eq!(steps[2]["savings"], "10");
}

#[test]
fn table_lists_all_coalitions_in_mask_order() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_ex1(dir.path());
    let out = sosi(&["table", "--instance", &path, "--json"]);
    let report = json_stdout(&out);
    let rows = report["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    let values: Vec<&str> = rows.iter().map(|r| r["value"].as_str().unwrap()).collect();
    assert_eq!(values, vec!["0", "0", "0", "2", "0", "7", "2", "12"]);

    let brute = sosi(&["table", "--instance", &path, "--method", "brute", "--json"]);
    assert_eq!(json_stdout(&brute)["rows"], report["rows"]);
}

#[test]
fn shapley_and_core() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_ex1(dir.path());

    let out = sosi(&["shapley", "--instance", &path, "--json"]);
    let report = json_stdout(&out);
    assert_eq!(
        report["allocation"],
        serde_json::json!(["29/6", "7/3", "29/6"])
    );

    let out = sosi(&[
        "core", "--instance", &path, "--allocation", "29/6,7/3,29/6", "--json",
    ]);
    assert_eq!(json_stdout(&out)["in_core"], true);

    // coalitional violation: exit 1 with the witness {2,3}
    let out = sosi(&["core", "--instance", &path, "--allocation", "12,0,0", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["in_core"], false);
    assert_eq!(report["violation"]["kind"], "coalition");
    assert_eq!(report["violation"]["coalition"], serde_json::json!([2, 3]));

    // inefficiency is reported distinctly
    let out = sosi(&["core", "--instance", &path, "--allocation", "1,1,1", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["violation"]["kind"], "efficiency");
}

#[test]
fn verify_passes_on_ex1_and_fails_when_corrupted() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_ex1(dir.path());

    let out = sosi(&["verify", "--instance", &path, "--json"]);
    let report = json_stdout(&out);
    assert_eq!(report["violations"], 0);
    let phases = report["phases"].as_array().unwrap();
    assert!(phases.iter().all(|p| p["pass"] == true || p["skipped"] == true));

    let out = sosi(&["verify", "--instance", &path, "--self-test-corrupt", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["violations"].as_u64().unwrap() > 0);
}

#[test]
fn verify_skips_oracle_beyond_bound() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_ex1(dir.path());
    let out = sosi(&["verify", "--instance", &path, "--oracle-bound", "2", "--json"]);
    let report = json_stdout(&out);
    let phases = report["phases"].as_array().unwrap();
    let oracle = phases
        .iter()
        .find(|p| p["phase"] == "greedy-vs-oracle")
        .unwrap();
    assert_eq!(oracle["skipped"], true);
    assert_eq!(report["violations"], 0);
}

#[test]
fn gen_is_deterministic_and_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = sosi(&[
            "gen", "--n", "5", "--seed", "42",
            "--output", path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let text_a = std::fs::read_to_string(&a).unwrap();
    let text_b = std::fs::read_to_string(&b).unwrap();
    assert_eq!(text_a, text_b);

    // generated file feeds straight back into value
    let out = sosi(&["value", "--instance", a.to_str().unwrap(), "--json"]);
    assert!(json_stdout(&out)["value"].is_string());
}

#[test]
fn bench_reports_timings() {
    let out = sosi(&["bench", "--n", "50", "--seed", "1", "--repeat", "3", "--json"]);
    let report = json_stdout(&out);
    assert_eq!(report["n"], 50);
    assert!(report["grand_coalition_ms"].is_string());
    assert!(report["random_coalition_median_ms"].is_string());

    let out = sosi(&["bench", "--n", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_codes_for_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_ex1(dir.path());

    // parse error in the instance file -> 2
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"n": 2, "p": ["0", "1"], "sigma0": [1, 2], "w": ["1", "1"]}"#)
        .unwrap();
    let out = sosi(&["value", "--instance", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("p"));

    // oracle bound exceeded -> 3
    let out = sosi(&[
        "value", "--instance", &path, "--method", "brute", "--oracle-bound", "2",
    ]);
    assert_eq!(out.status.code(), Some(3));

    // unknown flag -> 2 (clap usage error)
    let out = sosi(&["value", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));

    // bad coalition spec -> 2
    let out = sosi(&["value", "--instance", &path, "--coalition", "0,9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_and_human_outputs_agree_on_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_ex1(dir.path());
    let json_out = sosi(&["shapley", "--instance", &path, "--json"]);
    let report = json_stdout(&json_out);
    let human = sosi(&["shapley", "--instance", &path]);
    let text = String::from_utf8(human.stdout).unwrap();
    for payoff in report["allocation"].as_array().unwrap() {
        assert!(text.contains(payoff.as_str().unwrap()), "{text}");
    }
}
