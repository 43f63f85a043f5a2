//! End-to-end tests of the command-line interface: file parsing, report
//! emission, determinism, and the exit-code contract.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const EDU_T12: &str = r#"{
  "family": "multiplicative_eu",
  "phi": {"kind": "identity"},
  "discount": {"kind": "exponential", "beta": 0.9},
  "value": {"kind": "identity"},
  "domain": {"x": [1.0, 100.0], "t": [0.0, 12.0]}
}"#;

const CURVED_POWER: &str = r#"{
  "family": "multiplicative_eu",
  "phi": {"kind": "neg_neglog_pow", "b": 0.6},
  "discount": {"kind": "power_exponent", "d": 0.9, "a": 2.0},
  "value": {"kind": "bounded_ratio", "c": 1.0},
  "domain": {"x": [0.1, 10.0], "t": [0.1, 5.0]}
}"#;

const GLBU: &str = r#"{
  "family": "glbu",
  "pi_half": 0.3,
  "discount": {"kind": "exponential", "beta": 0.9},
  "value": {"kind": "identity"},
  "domain": {"x": [1.0, 100.0], "t": [0.0, 12.0]}
}"#;

const BINARY_LOTTERY: &str =
    r#"{"atoms":[{"x":100.0,"t":1.0,"p":0.5},{"x":100.0,"t":11.0,"p":0.5}]}"#;

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        Fixture {
            dir: TempDir::new().expect("temp dir"),
        }
    }

    fn file(&self, name: &str, contents: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, contents).expect("write fixture");
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn timelot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_timelot"))
        .args(args)
        .env_remove("TIMELOT_SEED")
        .output()
        .expect("spawn timelot")
}

fn timelot_with_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_timelot"))
        .args(args)
        .env(key, value)
        .output()
        .expect("spawn timelot")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).expect("read output")).expect("parse json")
}

#[test]
fn eval_prints_the_lottery_value() {
    let fx = Fixture::new();
    let model = fx.file("edu.json", EDU_T12);
    let lottery = fx.file("lot.json", BINARY_LOTTERY);
    let out = timelot(&[
        "eval",
        "--model",
        model.to_str().unwrap(),
        "--lottery",
        lottery.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    let value = v["result"]["value"].as_f64().unwrap();
    assert!((value - 60.6905298045).abs() < 1e-9);
    // The run embeds its resolved settings.
    assert_eq!(v["config"]["command"], "eval");
    assert_eq!(v["config"]["seed"], 42);
}

#[test]
fn audit_exit_codes_follow_the_verdicts() {
    let fx = Fixture::new();
    let edu = fx.file("edu.json", EDU_T12);
    let ex1 = fx.file("ex1.json", CURVED_POWER);

    // EDU: risk aversion over time lotteries is refuted, exit 1.
    let out = timelot(&["audit", "--model", edu.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let v = stdout_json(&out);
    assert_eq!(v["result"]["verdicts"]["weak_ratl"]["verdict"], "violated");
    assert_eq!(
        v["result"]["verdicts"]["weak_rstl"]["verdict"],
        "holds_strictly"
    );

    // The curved-power model passes every gate, exit 0.
    let out = timelot(&["audit", "--model", ex1.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn audit_csv_has_one_row_per_axiom() {
    let fx = Fixture::new();
    let model = fx.file("edu.json", EDU_T12);
    let out = timelot(&[
        "audit",
        "--model",
        model.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines.len(), 12, "header + 11 axioms:\n{text}");
    assert!(lines[0].starts_with("axiom,verdict"));
    for axiom in [
        "outcome_monotonicity",
        "impatience",
        "stochastic_impatience",
        "weak_ratl",
        "weak_rstl",
        "ratl",
        "rstl",
        "no_future_bias",
        "future_bias",
        "wci",
        "double_cancellation",
    ] {
        assert!(
            lines.iter().any(|l| l.starts_with(axiom)),
            "missing {axiom}"
        );
    }
}

#[test]
fn indiff_matches_the_closed_form() {
    let fx = Fixture::new();
    let model = fx.file("edu.json", EDU_T12);
    let out = timelot(&[
        "indiff",
        "--model",
        model.to_str().unwrap(),
        "--x",
        "100",
        "--t",
        "6",
        "--tau",
        "2",
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    let y = v["result"]["y"].as_f64().unwrap();
    assert!((y - 81.0).abs() < 1e-8, "got {y}");
    assert!(v["result"]["indifference_residual"].as_f64().unwrap() < 1e-7);
}

#[test]
fn ce_reports_the_risk_premium_sign() {
    let fx = Fixture::new();
    let model = fx.file("edu.json", EDU_T12);
    let lottery = fx.file("lot.json", BINARY_LOTTERY);
    let out = timelot(&[
        "ce",
        "--model",
        model.to_str().unwrap(),
        "--lottery",
        lottery.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    let t_star = v["result"]["t_star"].as_f64().unwrap();
    assert!((t_star - 4.7397501177444).abs() < 1e-6);
    assert_eq!(v["result"]["classification"], "risk_seeking");
}

#[test]
fn input_errors_exit_two_with_a_diagnostic() {
    let fx = Fixture::new();

    // Unknown key.
    let bad = EDU_T12.replace("\"family\"", "\"extra\": 1, \"family\"");
    let model = fx.file("bad.json", &bad);
    let out = timelot(&["audit", "--model", model.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown keys"));

    // Guarantee violation names the constraint.
    let bad = CURVED_POWER.replace("0.6", "0.4");
    let model = fx.file("bad_b.json", &bad);
    let out = timelot(&["audit", "--model", model.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("b must lie in (1/a, 1)"));

    // Discount parameter out of range.
    let bad = EDU_T12.replace("0.9", "1.2");
    let model = fx.file("bad_beta.json", &bad);
    let out = timelot(&["eval", "--model", model.to_str().unwrap(), "--lottery", "x"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("beta must lie in (0, 1)"));

    // Probability sum error in the lottery file.
    let model = fx.file("edu.json", EDU_T12);
    let lottery = fx.file(
        "bad_lot.json",
        r#"{"atoms":[{"x":100,"t":1,"p":0.5},{"x":100,"t":11,"p":0.49}]}"#,
    );
    let out = timelot(&[
        "eval",
        "--model",
        model.to_str().unwrap(),
        "--lottery",
        lottery.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("probabilities sum"));

    // Missing file.
    let out = timelot(&["audit", "--model", fx.path("nope.json").to_str().unwrap()]);
    assert_eq!(code(&out), 2);

    // Unknown flag is a usage error.
    let out = timelot(&["audit", "--model", model.to_str().unwrap(), "--bogus"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn reports_are_byte_identical_for_a_fixed_seed() {
    let fx = Fixture::new();
    let model = fx.file("ex1.json", CURVED_POWER);
    let out_a = fx.path("a.json");
    let out_b = fx.path("b.json");
    for (out_path, seed) in [(&out_a, "7"), (&out_b, "7")] {
        let out = timelot(&[
            "audit",
            "--model",
            model.to_str().unwrap(),
            "--seed",
            seed,
            "--out",
            out_path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
    }
    let a = read_json(&out_a);
    let b = read_json(&out_b);
    // Everything outside the volatile meta block must match byte for byte.
    assert_eq!(
        serde_json::to_string(&a["config"]).unwrap(),
        serde_json::to_string(&b["config"]).unwrap()
    );
    assert_eq!(
        serde_json::to_string(&a["result"]).unwrap(),
        serde_json::to_string(&b["result"]).unwrap()
    );
}

#[test]
fn seed_falls_back_to_the_environment() {
    let fx = Fixture::new();
    let model = fx.file("edu.json", EDU_T12);
    let out = timelot_with_env(
        &["audit", "--model", model.to_str().unwrap()],
        "TIMELOT_SEED",
        "123",
    );
    let v = stdout_json(&out);
    assert_eq!(v["config"]["seed"], 123);
    assert_eq!(v["result"]["settings"]["seed"], 123);
}

#[test]
fn audit_report_round_trips_through_the_library_parser() {
    let fx = Fixture::new();
    let model = fx.file("ex1.json", CURVED_POWER);
    let out = timelot(&["audit", "--model", model.to_str().unwrap(), "--seed", "9"]);
    let v = stdout_json(&out);
    let report: timelot::axioms::AuditReport =
        serde_json::from_value(v["result"].clone()).expect("report parses back");
    let again = serde_json::to_value(&report).unwrap();
    assert_eq!(v["result"], again);
}

#[test]
fn demo_incompat_runs_the_chain_or_reports_the_failed_hypothesis() {
    let fx = Fixture::new();
    let edu = fx.file("edu.json", EDU_T12);
    let out = timelot(&[
        "demo-incompat",
        "--model",
        edu.to_str().unwrap(),
        "--x",
        "100",
        "--t",
        "5",
        "--ntau",
        "10",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["result"]["rows"].as_array().unwrap().len(), 10);

    // The curved-power model is future biased: hypothesis audit refuses.
    let ex1 = fx.file("ex1.json", CURVED_POWER);
    let out = timelot(&[
        "demo-incompat",
        "--model",
        ex1.to_str().unwrap(),
        "--x",
        "1.0",
        "--t",
        "2.0",
    ]);
    assert_eq!(code(&out), 1);
    let v = stdout_json(&out);
    assert_eq!(v["result"]["hypothesis_failed"], "no_future_bias");
}

#[test]
fn glbu_demo_emits_one_row_per_pi() {
    let fx = Fixture::new();
    let model = fx.file("glbu.json", GLBU);
    let out = timelot(&[
        "glbu-demo",
        "--model",
        model.to_str().unwrap(),
        "--pi-grid",
        "0.3,0.5,0.7",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines.len(), 4, "{text}");
    assert!(lines[1].starts_with("0.3,violated,"));
    assert!(lines[2].starts_with("0.5,holds_strictly,0,"));
}

#[test]
fn scan_example_classifies_cells() {
    let out = timelot(&[
        "scan-example",
        "--a-range",
        "1.5:2.5",
        "--b-range",
        "0.3:0.9",
        "--d",
        "0.9",
        "--cells",
        "4",
        "--scan-grid-n",
        "11",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines.len(), 17, "header + 16 cells:\n{text}");
    assert!(lines[0].starts_with("a,b,valid"));
}

#[test]
fn invariance_distinguishes_adjusted_from_broken_transforms() {
    let fx = Fixture::new();
    let model = fx.file("edu.json", EDU_T12);
    let out = timelot(&[
        "invariance",
        "--model",
        model.to_str().unwrap(),
        "--a",
        "2",
        "--b1",
        "0.1",
        "--b2",
        "-0.3",
        "--pairs",
        "400",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["result"]["agreed"], true);

    let out = timelot(&[
        "invariance",
        "--model",
        model.to_str().unwrap(),
        "--a",
        "2",
        "--b1",
        "0.1",
        "--b2",
        "-0.3",
        "--pairs",
        "400",
        "--broken-phi",
    ]);
    assert_eq!(code(&out), 1);
    let v = stdout_json(&out);
    assert_eq!(v["result"]["agreed"], false);
    assert!(v["result"]["witness"].is_object());
}

#[test]
fn exit_code_contract_matches_reported_gates_across_the_catalog() {
    let fx = Fixture::new();
    let disappointment = r#"{
      "family": "disappointment",
      "discount": {"kind": "exponential", "beta": 0.9},
      "value": {"kind": "identity"},
      "gain": {"lambda": 0.5, "kappa": 1.0},
      "reference": {"kind": "mean_of_lottery"},
      "domain": {"x": [1.0, 100.0], "t": [0.0, 10.0]}
    }"#;
    let hyperbolic = r#"{
      "family": "multiplicative_eu",
      "phi": {"kind": "identity"},
      "discount": {"kind": "hyperbolic", "k": 1.0},
      "value": {"kind": "identity"},
      "domain": {"x": [1.0, 100.0], "t": [0.0, 10.0]}
    }"#;
    for (name, json) in [
        ("edu", EDU_T12),
        ("ex1", CURVED_POWER),
        ("glbu", GLBU),
        ("disappointment", disappointment),
        ("hyperbolic", hyperbolic),
    ] {
        let model = fx.file(&format!("{name}.json"), json);
        let out = timelot(&[
            "audit",
            "--model",
            model.to_str().unwrap(),
            "--sample-n",
            "500",
        ]);
        let v = stdout_json(&out);
        let gated = [
            "outcome_monotonicity",
            "impatience",
            "stochastic_impatience",
            "weak_ratl",
            "ratl",
            "wci",
            "double_cancellation",
        ];
        let any_violated = gated
            .iter()
            .any(|a| v["result"]["verdicts"][a]["verdict"] == "violated");
        let expected = i32::from(any_violated);
        assert_eq!(
            code(&out),
            expected,
            "{name}: report and exit code disagree"
        );
    }
}
