use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_singtrace")).current_dir(dir).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) {
    std::fs::write(dir.join(name), body).unwrap();
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

#[test]
fn classify_inline_family() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["classify", "--kind", "power_log", "--p", "1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["verdict"], "singularly traceable");
    for key in ["indices", "liminf", "ratio"] {
        assert_eq!(r["result"][key]["traceable"], "true");
    }
    assert_eq!(r["config"]["estimator"]["horizon"], 40.0);
}

#[test]
fn dichotomy_zero_case() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "A.json", r#"{"kind":"power_log","p":2,"shift":1}"#);
    write(dir.path(), "B.json", r#"{"kind":"power_log","p":1,"shift":1}"#);
    for cmd in ["dichotomy", "thm32"] {
        let out = run(dir.path(), &[cmd, "A.json", "B.json"]);
        assert_eq!(out.status.code(), Some(0));
        assert!(String::from_utf8_lossy(&out.stdout).contains("verdict: Zero"));
    }
}

#[test]
fn bad_input_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bad.json", r#"{"kind":"spectrum","pairs":[[1.0,2.0],[0.5,-1.0]]}"#);
    let out = run(dir.path(), &["classify", "bad.json", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("weight -1 at pair 1"));

    write(dir.path(), "incomplete.json", r#"{"kind":"power_log","q":1}"#);
    let out = run(dir.path(), &["classify", "incomplete.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing field `p`"));

    write(dir.path(), "broken.json", "{\"kind\":\"power_log\",\n\"p\":1,,}");
    let out = run(dir.path(), &["classify", "broken.json"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("broken.json") && err.contains("line 2"), "{err}");
}

#[test]
fn two_input_commands_need_two_inputs() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "A.json", r#"{"kind":"power_log","p":2}"#);
    let out = run(dir.path(), &["ideal-check", "A.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn undecided_exits_with_two() {
    // sampled data without a tail model: too short a horizon for any limit
    let dir = tempfile::tempdir().unwrap();
    let grid: Vec<f64> = (0..50).map(|i| i as f64).collect();
    let values: Vec<f64> = grid.iter().map(|x| 1.0 / (1.0 + x)).collect();
    let body = serde_json::json!({"kind": "sampled", "grid": grid, "values": values}).to_string();
    write(dir.path(), "s.json", &body);
    let out = run(dir.path(), &["classify", "s.json", "--format", "json"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(json(&out)["status"], "undecided");
}

#[test]
fn report_round_trips_through_recorded_config() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "A.json", r#"{"kind":"power_log","p":0.7,"q":1.5}"#);
    let args = ["indices", "A.json", "--force-estimate", "--h-grid", "1,3,5", "--format", "json"];
    let first = json(&run(dir.path(), &args));
    write(dir.path(), "config.json", &first["config"].to_string());
    let second = json(&run(dir.path(), &["indices", "A.json", "--config", "config.json", "--format", "json"]));
    assert_eq!(first, second);
    assert_eq!(first["config"]["estimator"]["h_grid"], serde_json::json!([1.0, 3.0, 5.0]));
    // 17 significant digits in the raw text
    let raw = String::from_utf8(run(dir.path(), &args).stdout).unwrap();
    assert!(raw.contains("\"horizon\": 40.000000000000000"), "{raw}");
}

#[test]
fn text_and_json_verdicts_agree() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "A.json", r#"{"kind":"power_log","p":0.5,"shift":1}"#);
    write(dir.path(), "B.json", r#"{"kind":"power_log","p":1,"shift":1}"#);
    for cmd in ["ideal-check", "kernel-check", "dichotomy"] {
        let j = json(&run(dir.path(), &[cmd, "A.json", "B.json", "--format", "json"]));
        let text = String::from_utf8(run(dir.path(), &[cmd, "A.json", "B.json"]).stdout).unwrap();
        let verdict = j["verdict"].as_str().unwrap();
        assert!(text.contains(&format!("verdict: {verdict}\n")), "{cmd}: {text}");
    }
}

#[test]
fn csv_rearrangement() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "s.csv", "value,weight\n1,2\n3,0.5\n1,1\n");
    let r = json(&run(dir.path(), &["rearrange", "s.csv", "--format", "json"]));
    let family = &r["result"]["family"];
    assert_eq!(family["kind"], "step");
    assert_eq!(family["breakpoints"], serde_json::json!([0.0, 0.5, 3.5]));
    assert_eq!(family["values"], serde_json::json!([3.0, 1.0]));
}

#[test]
fn construct_emits_a_reusable_step_family() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["construct", "dominator", "--kind", "g_linear", "--slope", "1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let family = &r["result"]["family"];
    assert_eq!(family["coordinates"], "log");
    assert_eq!(family["breakpoints"][1], 3.0);
    write(dir.path(), "stair.json", &family.to_string());
    let c = json(&run(dir.path(), &["classify", "stair.json", "--format", "json"]));
    assert_eq!(c["result"]["indices"]["traceable"], "true");
}
