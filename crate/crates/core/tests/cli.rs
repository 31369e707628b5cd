use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> (i32, String, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_netclosure"))
        .args(args)
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let json: Value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("not JSON ({e}):\n{text}"));
    (out.status.code().unwrap(), text, json)
}

fn path(name: &str) -> String {
    data(name).to_str().unwrap().to_string()
}

#[test]
fn solves_the_butterfly() {
    let (code, _, v) = run(&["solve", "--q", "2", &path("butterfly.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["solvable"], true);
    assert_eq!(v["rank"], 2);
    assert_eq!(v["alpha"], 4);
    assert_eq!(v["verified"], true);
}

#[test]
fn reduces_the_triangle_with_tail() {
    let (code, _, v) = run(&["reduce", &path("triangle_with_tail.digraph")]);
    assert_eq!(code, 0);
    assert_eq!(v["removed"], serde_json::json!([4, 3]));
}

#[test]
fn pentagon_is_unsolvable_over_two_symbols() {
    let (code, _, v) = run(&["guess", "--q", "2", &path("pentagon.digraph")]);
    assert_eq!(code, 0);
    assert_eq!(v["rank"], 3);
    assert_eq!(v["solvable"], false);
    assert_eq!(v["alpha"], 5);
    assert_eq!(v["guessing_number"], "log_2(5)");
}

#[test]
fn other_verbs_succeed() {
    let cycle = path("cycle3.digraph");
    for args in [
        vec!["closure", cycle.as_str()],
        vec!["closure", cycle.as_str(), "--set", "0"],
        vec!["rank", cycle.as_str()],
        vec!["check-axioms", cycle.as_str()],
        vec!["bounds", cycle.as_str()],
        vec!["product-check", cycle.as_str(), cycle.as_str()],
        vec!["convert", cycle.as_str()],
        vec!["--jobs", "1", "solve", cycle.as_str(), "--q", "3"],
    ] {
        let (code, text, _) = run(&args);
        assert_eq!(code, 0, "{args:?}:\n{text}");
    }
}

#[test]
fn certificate_and_output_files() {
    let dir = std::env::temp_dir().join(format!("netclosure-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cert = dir.join("cert.txt");
    let out = dir.join("out.json");
    let (code, text, _) = run(&[
        "solve",
        &path("butterfly.json"),
        "--emit-certificate",
        cert.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let f: netclosure::CodingFunction = std::fs::read_to_string(&cert).unwrap().parse().unwrap();
    assert_eq!((f.n(), f.q(), f.r()), (3, 2, 2));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(written, serde_json::from_str::<Value>(&text).unwrap());

    let converted = dir.join("cycle.closure");
    let (code, _, _) = run(&[
        "convert",
        &path("cycle3.digraph"),
        "--output",
        converted.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let cl: netclosure::ClosureOp = std::fs::read_to_string(&converted).unwrap().parse().unwrap();
    assert_eq!(cl, netclosure::ClosureOp::uniform(1, 3).unwrap());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    let (code, _, v) = run(&["rank", "/nonexistent/input.digraph"]);
    assert_eq!(code, 1);
    assert!(v["error"]["message"].is_string());

    let (code, _, v) = run(&["guess", "--q", "9", &path("pentagon.digraph")]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "too_large");

    let bad = std::env::temp_dir().join(format!("netclosure-bad-{}.digraph", std::process::id()));
    std::fs::write(&bad, "digraph 2\n0 7\n").unwrap();
    let (code, _, v) = run(&["rank", bad.to_str().unwrap()]);
    std::fs::remove_file(&bad).unwrap();
    assert!(code == 1 || code == 2, "{v}");

    let (code, _, v) = run(&["frobnicate"]);
    assert_eq!(code, 2);
    assert!(v["error"].is_object());
}

#[test]
fn invalid_network_names_the_rule() {
    let bad = std::env::temp_dir().join(format!("netclosure-net-{}.json", std::process::id()));
    std::fs::write(
        &bad,
        r#"{"r":1,"m":0,"arcs":[[1,0]],"labels":{"sources":[0],"sinks":[1]}}"#,
    )
    .unwrap();
    let (code, _, v) = run(&["solve", bad.to_str().unwrap()]);
    std::fs::remove_file(&bad).unwrap();
    assert_eq!(code, 1);
    assert_eq!(v["error"]["rule"], "source-in-degree");
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["solve".to_string(), path("butterfly.json")],
        vec!["reduce".to_string(), path("triangle_with_tail.digraph")],
        vec!["guess".to_string(), path("pentagon.digraph")],
    ] {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (_, a, _) = run(&args);
        let (_, b, _) = run(&args);
        assert_eq!(a, b);
    }
}
