use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dnt-game")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn error_line(o: &Output) -> Value {
    let err = String::from_utf8(o.stderr.clone()).unwrap();
    let line = err.lines().last().expect("an error line");
    serde_json::from_str(line).unwrap()
}

fn temp_json(v: &Value) -> tempfile::NamedTempFile {
    let f = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(f.path(), serde_json::to_string(v).unwrap()).unwrap();
    f
}

fn path(f: &tempfile::NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

#[test]
fn nonexcl_prints_the_scale_matrix() {
    let o = run(&["nonexcl", fixture("linguistic_scale.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for v in ["0.116", "0.140", "0.138", "0.170", "0.127"] {
        assert!(out.contains(v), "{v} in\n{out}");
    }
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 9);
    assert!(lines[1].starts_with("VP  1.000  0.116  0.000"));
}

#[test]
fn nonexcl_json_round_trips() {
    let o = run(&["--format", "json", "nonexcl", fixture("scenario_alpha_given_bs1.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["labels"][7], "X");
    assert!((v["rows"][4][5].as_f64().unwrap() - 0.170).abs() < 5e-4);
}

#[test]
fn one_label_scale() {
    let f = temp_json(&serde_json::json!({"scale": {"only": [0.2, 0.5, 0.8]}}));
    let o = run(&["--format", "json", "nonexcl", path(&f)]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"][0][0], 1.0);
}

#[test]
fn malformed_tfn_names_the_field() {
    let f = temp_json(&serde_json::json!({"scale": {"VP": [0.0, 0.0, 0.25], "P": [0.5, 0.3, 0.1]}}));
    let o = run(&["nonexcl", path(&f)]);
    assert_eq!(o.status.code(), Some(2));
    let e = error_line(&o);
    assert_eq!(e["error"], "parse");
    assert_eq!(e["code"], 2);
    assert_eq!(e["path"], "scale.P");
}

#[test]
fn unreadable_file_is_a_parse_error() {
    let o = run(&["nonexcl", "/nonexistent/scale.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_line(&o)["error"], "parse");
}

#[test]
fn combine_reproduces_the_two_source_example() {
    let o = run(&[
        "combine",
        fixture("two_source_dnumbers.json").to_str().unwrap(),
        fixture("two_source_matrix.json").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "step 1: K_D = 0.423");
    let rest: Vec<Vec<&str>> = lines[1..].iter().map(|l| l.split_whitespace().collect()).collect();
    assert_eq!(
        rest,
        vec![
            vec!["{a}", "0.589"],
            vec!["{b}", "0.225"],
            vec!["{a,b}", "0.075"],
            vec!["{X}", "0.035"],
            vec!["{a,X}", "0.045"],
            vec!["{b,X}", "0.014"],
            vec!["{a,b,X}", "0.017"],
        ]
    );
}

fn zero_matrix() -> tempfile::NamedTempFile {
    temp_json(&serde_json::json!({"labels": ["a", "b"], "rows": [[1.0, 0.0], [0.0, 1.0]]}))
}

#[test]
fn vacuous_partner_leaves_a_bpa_unchanged() {
    let ds = temp_json(&serde_json::json!({
        "frame": ["a", "b"],
        "dnumbers": [
            [{"focal": ["a"], "mass": 0.6}, {"focal": ["a", "b"], "mass": 0.4}],
            [{"focal": ["a", "b"], "mass": 1.0}]
        ]
    }));
    let m = zero_matrix();
    let o = run(&["--format", "json", "combine", path(&ds), path(&m)]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["steps"][0]["conflict"], 0.0);
    assert_eq!(
        v["result"],
        serde_json::json!([{"focal": ["a"], "mass": 0.6}, {"focal": ["a", "b"], "mass": 0.4}])
    );
}

#[test]
fn total_conflict_names_the_step() {
    let ds = temp_json(&serde_json::json!({
        "frame": ["a", "b"],
        "dnumbers": [
            [{"focal": ["a"], "mass": 1.0}],
            [{"focal": ["a"], "mass": 1.0}],
            [{"focal": ["b"], "mass": 1.0}]
        ]
    }));
    let m = zero_matrix();
    let o = run(&["combine", path(&ds), path(&m)]);
    assert_eq!(o.status.code(), Some(3));
    let e = error_line(&o);
    assert_eq!(e["error"], "domain");
    assert!(e["step"].as_str().unwrap().starts_with("step 2"), "{e}");
}

#[test]
fn run_column_prints_the_payoff_chain() {
    let o = run(&["run", fixture("scenario_alpha_given_bs1.json").to_str().unwrap(), "--column", "BS1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("fuzzy payoff  (0.629, 0.791, 0.918)"), "{out}");
    let last = out.lines().last().unwrap();
    assert!(last.starts_with("payoffs: AS1 0.779  AS2 0.689  AS3 0.192  AS4 0.317  AS5 0.15"), "{last}");
}

#[test]
fn run_column_json() {
    let file = fixture("scenario_alpha_given_bs1.json");
    let o = run(&["--format", "json", "run", file.to_str().unwrap(), "--column", "Alpha|BS1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let expected = [("AS1", 0.779), ("AS2", 0.689), ("AS3", 0.192), ("AS4", 0.317), ("AS5", 0.154)];
    for (s, p) in expected {
        assert!((v["payoffs"][s].as_f64().unwrap() - p).abs() < 2e-3, "{s}");
    }
    assert!(v["cells"]["AS1"]["fused"].as_array().unwrap().len() > 13);
}

#[test]
fn run_column_for_an_uncovered_case() {
    let o = run(&["run", fixture("scenario_alpha_given_bs1.json").to_str().unwrap(), "--column", "BS2"]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(error_line(&o)["missing"][0], "Alpha|BS2");
}

#[test]
fn run_full_on_a_game_document() {
    let o = run(&["run", fixture("dnt_game.json").to_str().unwrap(), "--full"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("pure equilibria: (AS5, BS3)"), "{out}");
    assert!(out.contains("Beta best-response counts: BS1 0  BS2 0  BS3 3  BS4 2"));
    let j = run(&["--format", "json", "run", fixture("topsis_game.json").to_str().unwrap(), "--full"]);
    let v: Value = serde_json::from_str(&stdout(&j)).unwrap();
    assert_eq!(v["equilibria"], serde_json::json!(["(AS5, BS3)"]));
    assert_eq!(v["best_response_counts"]["Beta"]["BS4"], 4);
    assert_eq!(v["rankings"]["Alpha"]["BS3"]["AS1"], 4);
}

#[test]
fn run_full_without_coverage_exits_4() {
    let o = run(&["run", fixture("scenario_alpha_given_bs1.json").to_str().unwrap(), "--full"]);
    assert_eq!(o.status.code(), Some(4));
    let e = error_line(&o);
    assert_eq!(e["error"], "coverage");
    assert!(e["missing"].as_array().unwrap().iter().any(|m| m == "Beta|AS1"));
}

#[test]
fn run_needs_a_mode() {
    let o = run(&["run", fixture("dnt_game.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let file = fixture("scenario_alpha_given_bs1.json");
    let args = ["run", file.to_str().unwrap(), "--column", "BS1"];
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
}

#[test]
fn reproduce_paper_passes() {
    let o = run(&["reproduce-paper"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().last().unwrap().ends_with(" 0 failed"), "{out}");
    assert!(!out.contains("FAIL"));
}

#[test]
fn reproduce_paper_only_one_group() {
    let o = run(&["reproduce-paper", "--only", "nonexcl"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let ids: Vec<&str> = out.lines().skip(1).filter(|l| l.starts_with("PASS")).map(|l| l.split_whitespace().nth(1).unwrap()).collect();
    assert!(!ids.is_empty());
    assert!(ids.iter().all(|id| id.starts_with("nonexcl/")), "{ids:?}");
}

#[test]
fn reproduce_paper_reports_a_perturbed_check() {
    let o = run(&["reproduce-paper", "--perturb", "fusion/payoff"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let fails: Vec<&str> = out.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(fails.len(), 1);
    assert!(fails[0].contains("fusion/payoff"));
    assert_eq!(error_line(&o)["failed"], serde_json::json!(["fusion/payoff"]));
}

#[test]
fn reproduce_paper_tolerance_override() {
    let o = run(&["--tolerance", "1e-9", "reproduce-paper", "--only", "column"]);
    assert_eq!(o.status.code(), Some(1));
}
