use std::process::{Command, Output};

fn qva(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qva")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> serde_json::Value {
    let out = qva(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn enumerate_counts() {
    let v = json(&["enumerate", "--degree", "4", "--max-charge", "1"]);
    assert_eq!(v["degree"], 4);
    assert_eq!(v["monomials"], serde_json::json!([[[1, -4]], [[1, -3], [1, -1]]]));
    let v = json(&["enumerate", "--degree", "0"]);
    assert_eq!(v["monomials"], serde_json::json!([[]]));
    let v = json(&["enumerate", "--degree", "4"]);
    assert_eq!(v["monomials"].as_array().unwrap().len(), 5);
}

#[test]
fn characters() {
    let v = json(&["character", "--level", "1", "--degree", "8"]);
    assert_eq!(v["coeffs"], serde_json::json!([1, 1, 1, 1, 2, 2, 3, 3, 4]));
    let v = json(&["character", "--degree", "5"]);
    assert_eq!(v["coeffs"], serde_json::json!([1, 1, 2, 3, 5, 7]));
    let v = json(&["character", "--level", "3", "--degree", "2"]);
    assert_eq!(v["coeffs"], serde_json::json!([1, 1, 2]));
    let v = json(&["character", "--level", "2", "--degree", "4", "--charges"]);
    assert_eq!(v["charges"][4], serde_json::json!({"1": 1, "2": 2}));
}

#[test]
fn verify_suites_pass() {
    for args in [
        vec!["verify", "--suite", "g", "--h-order", "30"],
        vec!["verify", "--suite", "rmatrix", "--h-order", "20"],
        vec!["verify", "--suite", "relations", "--pmax", "5", "--t", "1"],
        vec!["verify", "--suite", "ideal", "--level", "2", "--degree", "8", "--t", "-1/2", "--seed", "7"],
        vec!["verify", "--suite", "slocality", "--h-order", "4"],
        vec!["verify", "--suite", "basis", "--degree", "8", "--t", "2"],
    ] {
        let v = json(&args);
        assert_eq!(v["passed"], true, "{args:?}");
        assert!(!v["checks"].as_array().unwrap().is_empty());
    }
}

#[test]
fn output_is_deterministic() {
    let a = qva(&["verify", "--suite", "ideal", "--seed", "3"]).stdout;
    let b = qva(&["verify", "--suite", "ideal", "--seed", "3"]).stdout;
    assert_eq!(a, b);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(qva(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(qva(&["verify", "--t", "x/2"]).status.code(), Some(2));
    assert_eq!(qva(&["character", "--level", "0", "--degree", "3"]).status.code(), Some(2));
    assert_eq!(qva(&["enumerate"]).status.code(), Some(2));
}

#[test]
fn plain_format_and_out_file() {
    let out = qva(&["character", "--degree", "5", "--format", "plain"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "1 1 2 3 5 7\n");
    let dir = std::env::temp_dir().join(format!("qva-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.json");
    let out = qva(&["enumerate", "--degree", "3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["degree"], 3);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn thread_hint_is_accepted() {
    let out = Command::new(env!("CARGO_BIN_EXE_qva"))
        .args(["character", "--level", "1", "--degree", "6"])
        .env("QVA_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
}
