use std::fs;
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_morrey-embed");

const SWEEP: &str = r#"{
    "task": "sweep",
    "source": {"scale": "n", "d": 1, "s": 1.0, "p": 1.0, "q": 2.0, "phi": {"family": "power", "u": 2.0}},
    "target": {"scale": "n", "d": 1, "s": 0.0, "p": 2.0, "q": 2.0, "phi": {"family": "power", "u": 4.0}},
    "sweep": {"parameter": "s2", "start": -2.0, "stop": 2.0, "step": 0.1}
}"#;

fn run(config: &str, extra: &[&str]) -> (i32, String, String) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("job.json");
    fs::write(&path, config).unwrap();
    let out = Command::new(BIN).arg("--config").arg(&path).args(extra).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn sweep_is_deterministic_across_thread_counts() {
    let (code, a, _) = run(SWEEP, &["--jobs", "1"]);
    let (_, b, _) = run(SWEEP, &["--jobs", "4"]);
    assert_eq!(code, 0);
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 42);
    assert!(a.starts_with("s2,"));
}

#[test]
fn malformed_config_exits_2_without_output() {
    let (code, out, err) = run("{\"task\": \"sweep\", ", &[]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("config"));
    let (code, out, _) = run(r#"{"task": "verdict", "source": {"scale": "n"}}"#, &[]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
}

#[test]
fn inadmissible_weight_leaves_no_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    // u < p puts the target weight outside G_p
    let cfg = SWEEP.replace(r#""p": 2.0, "q": 2.0, "phi": {"family": "power", "u": 4.0}"#, r#""p": 4.0, "q": 2.0, "phi": {"family": "power", "u": 1.0}"#);
    assert_ne!(cfg, SWEEP);
    let (code, _, _) = run(&cfg, &["--out", report.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(!report.exists());
}

#[test]
fn verdict_json_and_csv() {
    let cfg = SWEEP.replace(r#""task": "sweep""#, r#""task": "verdict""#);
    let (code, json, _) = run(&cfg, &["--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["continuous"], "yes");
    assert_eq!(v["compact"], "yes");
    let (code, csv, _) = run(&cfg, &["--format", "csv"]);
    assert_eq!(code, 0);
    assert!(csv.contains("yes"));
}

#[test]
fn missing_config_is_a_usage_error() {
    let out = Command::new(BIN).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
