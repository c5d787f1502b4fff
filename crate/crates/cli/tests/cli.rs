//! End-to-end checks of the binary: exit-code conventions, report fields,
//! and the reference verdicts of the shipped examples.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_quivrep")
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("quivrep-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn report(output: &Output) -> serde_json::Value {
    serde_json::from_slice(&output.stdout).expect("stdout is a JSON report")
}

#[test]
fn classify_two_vertex_quiver_is_definite() {
    let path = write_temp(
        "a2.json",
        r#"{"vertices":[1,2],"arrows":[{"id":1,"src":1,"tgt":2}]}"#,
    );
    let out = run(&["classify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["schema_version"], "1");
    assert!(r["input_sha256"].as_str().unwrap().len() == 64);
    assert_eq!(
        r["classification"]["verdict"]["verdict"].as_str(),
        Some("yes")
    );
}

#[test]
fn classify_loop_quiver_exits_open_with_annotation() {
    let path = write_temp(
        "loop.json",
        r#"{"vertices":[1],"arrows":[{"id":1,"src":1,"tgt":1}]}"#,
    );
    let out = run(&["classify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let r = report(&out);
    let annotation = r["classification"]["verdict"]["annotation"]
        .as_str()
        .unwrap();
    assert!(annotation.contains("not divisible"));
}

#[test]
fn inject_test_reference_case() {
    let path = write_temp(
        "rep.json",
        r#"{"vertices":[1,2],"arrows":[{"id":1,"src":1,"tgt":2}],
            "modules":{"1":[1],"2":[1]},
            "maps":{"1":{"rows":1,"cols":1,"entries":[1]}}}"#,
    );
    let out = run(&["inject-test", path.to_str().unwrap(), "--ring", "gf:2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["verdict"]["overall"]["overall"].as_str(), Some("injective"));
}

#[test]
fn validation_errors_exit_one() {
    let path = write_temp(
        "bad.json",
        r#"{"vertices":[1],"arrows":[{"id":1,"src":1,"tgt":9}]}"#,
    );
    let out = run(&["classify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown vertex 9"));
}

#[test]
fn reports_are_deterministic() {
    let path = write_temp(
        "det.json",
        r#"{"vertices":[1,2],"arrows":[{"id":1,"src":1,"tgt":2}],
            "modules":{"1":[2],"2":[2]},
            "maps":{"1":{"rows":1,"cols":1,"entries":[2]}}}"#,
    );
    let a = run(&["dims", path.to_str().unwrap(), "--ring", "zmod:2^2"]);
    let b = run(&["dims", path.to_str().unwrap(), "--ring", "zmod:2^2"]);
    assert_eq!(a.stdout, b.stdout);
    let r = report(&a);
    assert_eq!(r["report"]["exact"], serde_json::json!({"kind": "finite", "value": 1}));
    assert_eq!(r["resolution_verified"], true);
}

#[test]
fn budget_exhaustion_exits_three() {
    let path = write_temp(
        "budget.json",
        r#"{"vertices":[1,2],"arrows":[{"id":1,"src":1,"tgt":2}],
            "modules":{"1":[1],"2":[1]},
            "maps":{"1":{"rows":1,"cols":1,"entries":[1]}}}"#,
    );
    let out = run(&[
        "adjunction-check",
        path.to_str().unwrap(),
        "--ring",
        "gf:2",
        "--vertex",
        "2",
        "--module",
        "1",
        "--budget",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget exceeded"));
}

#[test]
fn selftest_runs_every_criterion_and_exits_zero() {
    let out = run(&["selftest"]);
    let text = String::from_utf8_lossy(&out.stdout);
    for id in 1..=11 {
        assert!(
            text.contains(&format!("criterion {id:02}")),
            "criterion {id} missing from output:\n{text}"
        );
    }
    assert!(text.contains("pass"));
    assert!(!text.contains("FAIL"));
    assert_eq!(out.status.code(), Some(0));
}
