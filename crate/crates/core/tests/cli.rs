//! End-to-end runs of the command-line front end: exit codes, output files,
//! determinism and schema conformance.

use std::path::{Path, PathBuf};

use kirchhoff_ball::cli::run_in;
use serde_json::Value;

fn schema_path(kind: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{kind}.schema.json"))
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_valid(kind: &str, instance: &Value) {
    let schema = read_json(&schema_path(kind));
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("schema compiles");
    if let Err(errors) = compiled.validate(instance) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("{kind} report violates its schema: {msgs:#?}");
    };
}

const QUARTIC: [&str; 12] = ["--q", "2", "--p", "4", "--a", "1", "--b", "0.005", "--lambda-ratio", "0.5", "--mu", "1"];

#[test]
fn constants_report() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_in(dir.path(), &["constants", "--N", "3", "--R", "1"]), 0);
    let v = read_json(&dir.path().join("constants.json"));
    assert_valid("constants", &v);
    let l1 = v["result"]["constants"]["lambda1"].as_f64().unwrap();
    assert!((l1 - std::f64::consts::PI.powi(2)).abs() < 1e-10);
}

#[test]
fn solve_writes_report_and_profiles() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["solve"];
    args.extend(QUARTIC);
    assert_eq!(run_in(dir.path(), &args), 0);
    let v = read_json(&dir.path().join("report.json"));
    assert_valid("solve", &v);
    let roots = v["result"]["roots"].as_array().unwrap();
    assert!(!roots.is_empty());
    for i in 0..roots.len() {
        let text = std::fs::read_to_string(dir.path().join(format!("profile_{i}.csv"))).unwrap();
        assert_eq!(text.lines().next(), Some("r,u,du"));
    }
}

#[test]
fn solve_is_byte_identical_across_runs() {
    // The output directory is part of the embedded config, so reuse it.
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["solve", "--grid-points", "40"];
    args.extend(QUARTIC);
    let names = ["report.json", "profile_0.csv"];
    assert_eq!(run_in(dir.path(), &args), 0);
    let first: Vec<Vec<u8>> = names.iter().map(|n| std::fs::read(dir.path().join(n)).unwrap()).collect();
    assert_eq!(run_in(dir.path(), &args), 0);
    for (name, bytes) in names.iter().zip(first) {
        assert!(std::fs::read(dir.path().join(name)).unwrap() == bytes, "{name} differs between runs");
    }
}

#[test]
fn classify_report_and_resonance() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["classify"];
    args.extend(QUARTIC);
    assert_eq!(run_in(dir.path(), &args), 0);
    assert_valid("classify", &read_json(&dir.path().join("report.json")));

    let dir = tempfile::tempdir().unwrap();
    let resonant = ["classify", "--q", "2", "--p", "4", "--a", "1", "--b", "0.005", "--lambda-ratio", "1", "--mu", "1"];
    assert_eq!(run_in(dir.path(), &resonant), 2);
}

#[test]
fn limits_report() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["limits", "--q", "2", "--p", "4", "--a", "1", "--b", "1", "--lambda", "1", "--mu", "1"];
    assert_eq!(run_in(dir.path(), &args), 0);
    let v = read_json(&dir.path().join("limits.json"));
    assert_valid("limits", &v);
    assert!(!v["result"]["checks"].as_array().unwrap().is_empty());
}

#[test]
fn scan_and_oracle_tables() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["scan", "--grid-points", "20"];
    args.extend(QUARTIC);
    assert_eq!(run_in(dir.path(), &args), 0);
    let scan = std::fs::read_to_string(dir.path().join("fscan.csv")).unwrap();
    assert_eq!(scan.lines().next(), Some("alpha,D,f"));
    assert!(scan.lines().count() > 10);

    let args = ["oracle", "--q", "2", "--p", "4", "--grid-points", "3", "--oracle-points", "400"];
    assert_eq!(run_in(dir.path(), &args), 0);
    let table = std::fs::read_to_string(dir.path().join("oracle.csv")).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("alpha,D_shoot,D_oracle,gap"));
    assert_eq!(lines.count(), 3);
}

#[test]
fn config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# quartic, below resonance\nq = 2\np = 4\na = 1\nb = 0.005\nmu = 1\nlambda = 1\n").unwrap();
    let cfg = cfg.display().to_string();
    assert_eq!(run_in(dir.path(), &["classify", "--config", &cfg, "--lambda", "2"]), 0);
    let v = read_json(&dir.path().join("report.json"));
    assert_eq!(v["config"]["params"]["lambda"].as_f64(), Some(2.0));
}

#[test]
fn usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    // p above 2N/(N−2) = 6 is rejected before any computation.
    assert_eq!(run_in(dir.path(), &["classify", "--q", "2", "--p", "6.0000001"]), 1);
    assert_eq!(run_in(dir.path(), &["classify", "--q", "2", "--p", "nope"]), 1);
    assert_eq!(run_in(dir.path(), &["solve", "--unknown-flag", "1"]), 1);
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(run_in(dir.path(), &["constants", "--config", &cfg.display().to_string()]), 1);
    assert!(std::fs::read_dir(dir.path()).unwrap().all(|e| e.unwrap().path() == cfg));
}
