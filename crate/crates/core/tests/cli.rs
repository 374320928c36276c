//! End-to-end runs of the `horodisc` binary.

use std::path::Path;
use std::process::{Command, Output};

fn horodisc(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_horodisc"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn norms_report_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"experiment": "id", "map": {"kind": "identity"}}"#);
    let out = horodisc(&["norms", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["command"], "norms");
    assert_eq!(v["toolkit_version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["config_hash"].as_str().unwrap().len(), 64);
    assert_eq!(v["result"]["norms"]["schwarzian"]["value"], 0.0);
}

#[test]
fn identical_configs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"experiment": "fam", "map": {"kind": "example_family", "c": 3.0, "zeta": "-i"},
            "params": {"c": 3.0, "criteria": ["becker", "hv", "injectivity"], "seed": 5, "n_pairs": 500}}"#,
    );
    let a = horodisc(&["criteria", "--config", &cfg, "--out", "a"], dir.path());
    let b = horodisc(&["criteria", "--config", &cfg, "--out", "b"], dir.path());
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(stdout(&a).trim(), "PASS criteria");
    let ra = std::fs::read(dir.path().join("a/criteria.json")).unwrap();
    let rb = std::fs::read(dir.path().join("b/criteria.json")).unwrap();
    assert_eq!(ra, rb);
    assert_eq!(b.status.code(), Some(0));
}

#[test]
fn failing_criterion_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"experiment": "k", "map": {"kind": "koebe"}}"#);
    let out = horodisc(&["criteria", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["passed"], false);
    assert_eq!(v["result"]["becker"]["holds"], false);
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{\n  \"experiment\": \"x\",\n  \"mapp\": {}\n}");
    let out = horodisc(&["norms", "--config", &bad], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");

    let no_seed = write(
        dir.path(),
        "s.json",
        r#"{"experiment": "x", "map": {"kind": "identity"}, "params": {"criteria": ["injectivity"]}}"#,
    );
    assert_eq!(horodisc(&["criteria", "--config", &no_seed], dir.path()).status.code(), Some(2));
    assert_eq!(
        horodisc(&["criteria", "--config", &no_seed, "--seed", "3"], dir.path()).status.code(),
        Some(0)
    );
    let missing = dir.path().join("nope.json");
    assert_eq!(
        horodisc(&["trace", "--config", missing.to_str().unwrap()], dir.path()).status.code(),
        Some(2)
    );
    assert_eq!(horodisc(&["reproduce", "no-such-id"], dir.path()).status.code(), Some(2));
}

#[test]
fn trace_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"experiment": "t", "map": {"kind": "example_family", "c": 2.0, "zeta": "1"}}"#,
    );
    let out = horodisc(&["trace", "--config", &cfg, "--csv", "t.csv", "--svg", "t.svg"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("t.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,re,im"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert!(rows.len() > 100);
    assert!(rows.windows(2).all(|w| w[0][0] < w[1][0]));
    let svg = std::fs::read_to_string(dir.path().join("t.svg")).unwrap();
    assert!(svg.contains("<polyline") && svg.contains("viewBox"));
}

#[test]
fn valence_of_cube() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"experiment": "z3", "map": {"kind": "polynomial", "coeffs": [[0,0],[0,0],[0,0],[1,0]]},
            "params": {"targets": [[0.2, -0.1]]}}"#,
    );
    let out = horodisc(&["valence", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["result"]["valence"]["estimate"]["value"], 3);
    assert_eq!(v["result"]["targets"][0]["winding_at_limit"]["value"], 3);
    assert_eq!(v["result"]["targets"][0]["preimages"]["cross_checked"], true);
}

#[test]
fn distortion_and_harmonic_commands() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "d.json",
        r#"{"experiment": "d", "params": {"envelope": {"kind": "rational", "b": 1.0}, "tol": 1e-6}}"#,
    );
    let out = horodisc(&["distortion", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["result"]["condition_ii"]["status"], "convergent");

    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"experiment": "d", "params": {"envelope": {"kind": "rational", "b": -1.0}}}"#,
    );
    assert_eq!(horodisc(&["distortion", "--config", &bad], dir.path()).status.code(), Some(2));

    let cfg = write(
        dir.path(),
        "h.json",
        r#"{"experiment": "h", "harmonic": {"h": {"kind": "identity"}, "g": {"kind": "constant", "c": [0.5, 0.0]}},
            "params": {"grid": 24}}"#,
    );
    let out = horodisc(&["harmonic", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["result"]["harmonic_becker"]["max_quantity"], 0.0);
    assert_eq!(v["result"]["omega"]["max_modulus"], 0.0);
}

#[test]
fn reproduce_prints_checks() {
    let dir = tempfile::tempdir().unwrap();
    let out = horodisc(&["reproduce", "distortion-envelopes", "--out", "r.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 5, "{text}");
    assert!(text.trim_end().ends_with("PASS distortion-envelopes"));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(v["command"], "reproduce distortion-envelopes");
}

#[test]
fn reproduce_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = horodisc(&["reproduce", "critical-C"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).trim_end().ends_with("FAIL critical-C"));
}
