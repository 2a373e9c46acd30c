//! End-to-end runs of the `nsamg` binary.

use std::path::Path;
use std::process::{Command, Output};

use nsamg::harness::{mtx, VerificationReport};

fn nsamg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nsamg")).args(args).output().expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn example_reports_pass_and_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    for id in ["1", "2", "3"] {
        let out = dir.path().join(format!("ex{id}.json"));
        let o = nsamg(&["example", id, "--format", "json", "--trials", "20", "--out", path(&out)]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let report = VerificationReport::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(report.summary.fail, 0);
        assert!(report.summary.pass > 0);
        assert!(report.checks.iter().any(|c| c.check_id.starts_with(&format!("example{id}."))));
    }
}

#[test]
fn verify_is_deterministic_for_a_fixed_seed() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("p.json");
    std::fs::write(&spec, r#"{"source": {"builtin": 2}, "trials": 30, "seed": 7}"#).unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = nsamg(&["verify", "--problem", path(&spec), "--out", path(&out)]);
        assert_eq!(o.status.code(), Some(0));
        std::fs::read_to_string(out).unwrap()
    };
    assert_eq!(run("a.json"), run("b.json"));
}

#[test]
fn generated_matrix_feeds_verify() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.mtx");
    let o = nsamg(&["generate", "--type", "conv-diff", "--n", "12", "--beta", "5", "--scheme", "upwind", "--out", path(&a)]);
    assert_eq!(o.status.code(), Some(0));
    let m = mtx::read_path(&a).unwrap();
    assert_eq!((m.nrows(), m.ncols()), (12, 12));

    let spec = dir.path().join("p.json");
    std::fs::write(
        &spec,
        r#"{"source": {"matrix_market": {"a": "a.mtx"}}, "nc": 4, "nu1": 1, "nu2": 1,
            "b_mode": "identity", "smoother": {"rule": "jacobi"}, "trials": 20}"#,
    )
    .unwrap();
    let csv_out = dir.path().join("r.csv");
    let o = nsamg(&["verify", "--problem", path(&spec), "--format", "csv", "--out", path(&csv_out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(csv_out).unwrap();
    assert!(text.starts_with("check_id,anchor,verdict"));
    assert!(text.lines().count() > 10);
}

#[test]
fn configuration_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.json");
    assert_eq!(nsamg(&["verify", "--problem", path(&missing)]).status.code(), Some(2));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"source": {"builtin": 9}}"#).unwrap();
    assert_eq!(nsamg(&["verify", "--problem", path(&bad)]).status.code(), Some(2));

    let garbled = dir.path().join("g.mtx");
    std::fs::write(&garbled, "%%MatrixMarket matrix array real general\n2 2\n1\n").unwrap();
    let spec = dir.path().join("s.json");
    std::fs::write(&spec, r#"{"source": {"matrix_market": {"a": "g.mtx"}}}"#).unwrap();
    let o = nsamg(&["verify", "--problem", path(&spec)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));

    assert_eq!(nsamg(&["example", "4"]).status.code(), Some(2));
    assert_eq!(nsamg(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn non_hermitian_b_is_a_configuration_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("a.mtx"), "%%MatrixMarket matrix array real general\n2 2\n2\n0\n0\n3\n").unwrap();
    std::fs::write(dir.path().join("b.mtx"), "%%MatrixMarket matrix array real general\n2 2\n1\n0.5\n0\n1\n").unwrap();
    let spec = dir.path().join("s.json");
    std::fs::write(&spec, r#"{"source": {"matrix_market": {"a": "a.mtx", "b": "b.mtx"}}, "nc": 1}"#).unwrap();
    let o = nsamg(&["verify", "--problem", path(&spec)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Hermitian"));
}

#[test]
fn unattainable_tolerances_fail_checks_and_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("t.json");
    std::fs::write(&spec, r#"{"source": {"builtin": 2}, "trials": 10, "tolerances": {"eq": 1e-300, "opt": 1e-300}}"#).unwrap();
    let out = dir.path().join("r.json");
    let o = nsamg(&["verify", "--problem", path(&spec), "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(1));
    let report = VerificationReport::from_json(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert!(report.summary.fail > 0);
    assert_eq!(report.summary.total, report.summary.pass + report.summary.fail + report.summary.skipped);
}

#[test]
fn shipped_problem_specs_pass() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let spec = entry.unwrap().path();
        if spec.extension().is_some_and(|e| e == "json") {
            let o = nsamg(&["verify", "--problem", path(&spec), "--trials", "20", "--format", "text"]);
            assert_eq!(o.status.code(), Some(0), "{}: {}", spec.display(), String::from_utf8_lossy(&o.stdout));
            seen += 1;
        }
    }
    assert!(seen >= 2);
}
