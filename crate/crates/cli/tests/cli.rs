use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const T1: &str = r#"{"format":"atgp-v1","vertices":[[0,0],[2,4],[4,0],[6,4],[8,0]],"altitude":5}"#;

fn tguard(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_tguard"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    if let Some(s) = stdin {
        child.stdin.take().unwrap().write_all(s.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().unwrap()
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).expect("valid JSON")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn solve_t1_with_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "t1.json", T1);
    let svg = dir.path().join("t1.svg");
    let out = tguard(&["solve", &input, "--certify", "--render", svg.to_str().unwrap(), "--events"], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let sol = json(&out.stdout);
    assert_eq!(sol["guards"], serde_json::json!(["5/2", "8"]));
    assert_eq!(sol["certificate"]["valid"], Value::Bool(true));
    let svg = fs::read_to_string(svg).unwrap();
    assert_eq!(svg.matches(r#"class="guard""#).count(), 2);
}

#[test]
fn verify_accepts_the_original_and_rejects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "t1.json", T1);
    let sol_path = dir.path().join("sol.json");
    let out = tguard(&["solve", &input, "--out", sol_path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    let ok = tguard(&["verify", &input, sol_path.to_str().unwrap()], None);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));

    let mut sol = json(&fs::read(&sol_path).unwrap());
    sol["guards"].as_array_mut().unwrap().pop();
    let tampered = write(dir.path(), "tampered.json", &sol.to_string());
    let bad = tguard(&["verify", &input, &tampered], None);
    assert_eq!(bad.status.code(), Some(3));
    let err = json(&bad.stderr);
    assert_eq!(err["error"], "certification_failed");
}

#[test]
fn generated_instances_pipe_into_solve() {
    let gen = tguard(&["gen", "--n", "50", "--seed", "9", "--profile", "sawtooth"], None);
    assert_eq!(gen.status.code(), Some(0));
    let text = String::from_utf8(gen.stdout).unwrap();
    let again = tguard(&["gen", "--n", "50", "--seed", "9", "--profile", "sawtooth"], None);
    assert_eq!(text.as_bytes(), again.stdout.as_slice());
    let out = tguard(&["solve", "-", "--certify"], Some(&text));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn invalid_instances_exit_with_2() {
    let not_monotone = r#"{"format":"atgp-v1","vertices":[[0,0],[0,1],[2,0]],"altitude":3}"#;
    let low = r#"{"format":"atgp-v1","vertices":[[0,0],[2,4],[4,0]],"altitude":4}"#;
    for body in [not_monotone, low, "not json"] {
        let out = tguard(&["solve", "-"], Some(body));
        assert_eq!(out.status.code(), Some(2), "{body}");
        let err = json(&out.stderr);
        assert_eq!(err["error"], "invalid_instance");
        assert_eq!(err["exit_code"], 2);
    }
}

#[test]
fn batch_solves_every_input() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", T1);
    let b = write(dir.path(), "b.json", r#"{"format":"atgp-v1","vertices":[[0,0],[8,0]],"altitude":1}"#);
    let out = tguard(&["solve", &a, &b], None);
    assert_eq!(out.status.code(), Some(0));
    let rows = json(&out.stdout);
    assert_eq!(rows[0]["solution"]["guards"].as_array().unwrap().len(), 2);
    assert_eq!(rows[1]["solution"]["guards"], serde_json::json!(["8"]));

    let bad = write(dir.path(), "bad.json", r#"{"format":"atgp-v1","vertices":[[0,0]],"altitude":1}"#);
    let out = tguard(&["solve", &a, &bad], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn profile_reports_each_height() {
    let out = tguard(&["profile", "-", "--heights", "5,100"], Some(T1));
    assert_eq!(out.status.code(), Some(0));
    let rows = json(&out.stdout);
    assert_eq!(rows[0]["guards"], 2);
    assert_eq!(rows[1]["guards"], 1);
    let low = tguard(&["profile", "-", "--heights", "3"], Some(T1));
    assert_eq!(low.status.code(), Some(2));
}

#[test]
fn polygon_input_reports_polygon_frame_guards() {
    let poly = r#"{"format":"polygon-v1","vertices":[["-2.5","2.5"],[0,0],[-1,3],[2,2],[1,5],[4,4],["1.5","6.5"]]}"#;
    let out = tguard(&["solve", "-", "--certify"], Some(poly));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let sol = json(&out.stdout);
    assert_eq!(sol["guards"].as_array().unwrap().len(), 2);
}

#[test]
fn bench_reports_rows() {
    let out = tguard(&["bench", "--sizes", "30,60", "--seed", "2"], None);
    assert_eq!(out.status.code(), Some(0));
    let rows = json(&out.stdout);
    assert_eq!(rows.as_array().unwrap().len(), 2);
    assert!(rows[1]["ratio"].is_number());
}

#[test]
fn usage_errors_are_not_instance_errors() {
    let out = tguard(&["gen", "--n", "5", "--profile", "hills"], None);
    assert_eq!(out.status.code(), Some(1));
    let out = tguard(&["frobnicate"], None);
    assert_eq!(out.status.code(), Some(1));
}
