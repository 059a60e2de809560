use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn mdconv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mdconv")).args(args).output().unwrap()
}

fn mdconv_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mdconv"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}\n{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

#[test]
fn bound_prints_number() {
    let out = mdconv(&["bound", "--m", "2", "--k", "1", "--n", "3", "--delta", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "9\n");
    let bad = mdconv(&["bound", "--m", "2", "--k", "4", "--n", "3", "--delta", "1"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn construct_to_file_then_certify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("code.json");
    let path = path.to_str().unwrap();
    let out = mdconv(&["construct", "--m", "2", "--n", "3", "--delta", "1", "--p", "7", "--source", "cauchy", "-o", path]);
    assert_eq!(out.status.code(), Some(0));
    let cert = json(&out);
    assert_eq!(cert["verdict"], "CERTIFIED_MDS");
    assert_eq!(cert["certified_distance"], 9);

    let code: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(code["field"], serde_json::json!({"p": 7, "e": 1}));
    assert_eq!(code["row_degrees"], serde_json::json!([1]));

    let again = mdconv(&["certify", path]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(json(&again), cert);

    let flat = json(&mdconv(&["flatten", path]));
    assert_eq!(flat["entries"], serde_json::json!([[2, 5, 4], [3, 2, 5], [6, 3, 2]]));

    let dist = mdconv(&["distance", path]);
    assert_eq!(dist.status.code(), Some(0));
    let dist = json(&dist);
    assert_eq!(dist["min_weight"], 9);
    assert_eq!(dist["cap"], 2);
    assert_eq!(dist["below_bound"], false);

    let witness = json(&mdconv(&["witness", path]));
    assert_eq!(witness["weight"], 9);
    assert_eq!(witness["bound"], 9);
}

#[test]
fn construct_without_output_prints_both() {
    let out = mdconv(&["construct-staircase", "--p", "17", "--m", "2", "--k", "2", "--n", "5", "--nu", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["code"]["k"], 2);
    assert_eq!(v["code"]["row_degrees"], serde_json::json!([2, 1]));
    assert_eq!(v["certificate"]["theorem"], "STAIRCASE_KN");
    assert_eq!(v["certificate"]["certified_distance"], 15);
}

#[test]
fn infeasible_constructions_exit_3() {
    let small = mdconv(&["construct", "--m", "2", "--n", "3", "--delta", "1", "--p", "2"]);
    assert_eq!(small.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&small.stderr).contains("too small"));
    let exhausted = mdconv(&[
        "construct", "--m", "2", "--n", "3", "--delta", "1", "--p", "5", "--source", "random", "--max-tries", "1",
        "--seed", "1",
    ]);
    assert_eq!(exhausted.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(mdconv(&["bound", "--m", "2"]).status.code(), Some(2));
    assert_eq!(mdconv(&["nonsense"]).status.code(), Some(2));
    assert_eq!(mdconv(&["certify", "/nonexistent/code.json"]).status.code(), Some(2));
    assert_eq!(mdconv_stdin(&["certify"], "{not json").status.code(), Some(2));
    assert_eq!(mdconv(&["construct", "--m", "2", "--n", "1", "--delta", "1", "--p", "7"]).status.code(), Some(2));
    assert_eq!(mdconv(&["construct", "--m", "1", "--n", "2", "--delta", "1", "--p", "5", "--source", "explicit"]).status.code(), Some(2));
}

#[test]
fn check_sr_reports_failing_minor() {
    let zero_entry = r#"{"field":{"p":5,"e":1},"entries":[[1,0],[1,2]]}"#;
    let out = mdconv_stdin(&["check-sr"], zero_entry);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["verdict"], false);
    assert_eq!(v["failing_minor"]["rows"], serde_json::json!([0]));
    assert_eq!(v["failing_minor"]["cols"], serde_json::json!([1]));

    let good = r#"{"field":{"p":5,"e":1},"entries":[[1,1],[1,2]]}"#;
    let out = mdconv_stdin(&["check-sr", "-"], good);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["minors_checked"], 5);
}

#[test]
fn explicit_source() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = dir.path().join("phi.json");
    std::fs::write(&matrix, r#"{"field":{"p":5,"e":1},"entries":[[1,1],[1,2]]}"#).unwrap();
    let m = matrix.to_str().unwrap();
    let out = mdconv(&["construct", "--p", "5", "--m", "1", "--n", "2", "--delta", "1", "--source", "explicit", "--matrix", m]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["code"]["generator"], serde_json::json!([[[[[0], 1], [[1], 1]], [[[0], 1], [[1], 2]]]]));
    assert_eq!(v["certificate"]["certified_distance"], 4);

    std::fs::write(&matrix, r#"{"field":{"p":5,"e":1},"entries":[[1,1],[1,1]]}"#).unwrap();
    let out = mdconv(&["construct", "--p", "5", "--m", "1", "--n", "2", "--delta", "1", "--source", "explicit", "--matrix", m]);
    assert_eq!(out.status.code(), Some(1));

    let out = mdconv(&["construct", "--p", "7", "--m", "1", "--n", "2", "--delta", "1", "--source", "explicit", "--matrix", m]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn encode_and_certify_from_stdin() {
    let code = r#"{"field":{"p":5,"e":1},"m":1,"k":1,"n":2,"generator":[[[[[0],1],[[1],1]],[[[0],1],[[1],2]]]]}"#;
    let out = mdconv_stdin(&["encode", "--message", "[[[[0],1],[[1],1]]]"], code);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["weight"], 6);
    assert_eq!(v["codeword"], serde_json::json!([[[[0], 1], [[1], 2], [[2], 1]], [[[0], 1], [[1], 3], [[2], 2]]]));

    let cert = mdconv_stdin(&["certify", "--pretty"], code);
    assert_eq!(cert.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&cert.stdout).contains("\n  \"theorem\": \"RATE_1N\""));

    let dist = json(&mdconv_stdin(&["distance", "--cap", "3"], code));
    assert_eq!(dist["min_weight"], 4);
}

#[test]
fn not_certified_exits_1() {
    // equal row degrees: no theorem profile applies
    let code = r#"{"field":{"p":2,"e":1},"m":2,"k":2,"n":3,"generator":[[[[[0,0],1]],[[[1,0],1]],[]],[[[[0,0],1]],[[[0,1],1]],[[[0,0],1]]]]}"#;
    let out = mdconv_stdin(&["certify"], code);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["verdict"], "NOT_CERTIFIED");
    assert_eq!(v["theorem"], Value::Null);
}

#[test]
fn distance_below_bound_exits_1() {
    let code = r#"{"field":{"p":5,"e":1},"m":1,"k":1,"n":2,"generator":[[[[[0],1],[[1],1]],[[[0],1],[[1],2]]]]}"#;
    let out = mdconv_stdin(&["distance", "--stop-below", "6", "--cap", "2"], code);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["below_bound"], true);
}

#[test]
fn workers_from_environment() {
    let code = r#"{"field":{"p":7,"e":1},"m":1,"k":1,"n":3,"generator":[[[[[0],1],[[1],1]],[[[0],1],[[1],2]],[[[0],1],[[1],3]]]]}"#;
    let one = mdconv_stdin(&["distance"], code);
    let mut child = Command::new(env!("CARGO_BIN_EXE_mdconv"))
        .arg("distance")
        .env("MDCONV_WORKERS", "3")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(code.as_bytes()).unwrap();
    let three = child.wait_with_output().unwrap();
    assert_eq!(one.stdout, three.stdout);
}

#[test]
fn selftest_passes() {
    let out = mdconv(&["selftest", "--seed", "11"]);
    assert_eq!(out.status.code(), Some(0));
    let suites = json(&out);
    let names: Vec<&str> = suites.as_array().unwrap().iter().map(|s| s["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["weight_lemma", "support_count_identity", "superregular_closure", "singleton_witness"]);
    assert!(suites.as_array().unwrap().iter().all(|s| s["violations"] == 0));
}
