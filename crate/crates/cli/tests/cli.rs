mod support;

use std::path::Path;
use std::process::Command;

use serde_json::Value;

use support::{fixture_path, QUERIES};

fn run(args: &[&str]) -> (u8, Value, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("deontix").chain(args.iter().copied());
    let code = deontix_cli::cli::run(argv, &mut out, &mut err);
    let report = serde_json::from_slice(&out).unwrap_or(Value::Null);
    (code, report, String::from_utf8(err).unwrap())
}

fn p(id: &str) -> String {
    fixture_path(id).to_string_lossy().into_owned()
}

#[test]
fn check_and_independence_on_the_article() {
    let (code, r, _) = run(&["check", &p("article-1")]);
    assert_eq!(code, 0);
    assert_eq!(r["consistency"]["status"], "consistent");
    let (code, r, _) = run(&["independence", &p("article-1")]);
    assert_eq!(code, 0);
    assert_eq!(r["report"]["perFormula"][1]["status"], "independent");
}

#[test]
fn query_exit_codes_follow_the_verdict() {
    let (code, r, _) = run(&["query", &p("case-2"), &p("article-1")]);
    assert_eq!((code, r["verdict"].as_str()), (0, Some("valid")));
    let (code, r, _) = run(&["query", &p("case-1"), &p("article-1")]);
    assert_eq!((code, r["verdict"].as_str()), (1, Some("counter_satisfiable")));
    let (code, r, _) = run(&[
        "--limits-depth",
        "1",
        "--limits-atoms",
        "1",
        "query",
        &p("case-2"),
        &p("article-1"),
    ]);
    assert_eq!((code, r["verdict"].as_str()), (2, Some("unknown")));
}

#[test]
fn test_command_runs_the_scenarios() {
    let paths: Vec<String> = QUERIES.iter().map(|q| p(q)).collect();
    let mut args = vec!["test", "--limits-ms", "5000"];
    let law = p("article-1");
    args.push(&law);
    args.extend(paths.iter().map(String::as_str));
    let (code, r, _) = run(&args);
    assert_eq!(code, 0);
    assert_eq!(r["summary"]["passed"], 2);
    assert_eq!(r["summary"]["skipped"], 2);
}

#[test]
fn export_then_prove_keeps_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    for (query, status, exit) in [("case-2", "proved", 0), ("case-1", "counter_satisfiable", 1)] {
        let out = dir.path().join(format!("{query}.cnf"));
        let out_s = out.to_string_lossy().into_owned();
        let (code, r, _) = run(&["export", &p("article-1"), &out_s, "--query", &p(query)]);
        assert_eq!(code, 0);
        assert!(r["clauses"].as_u64().unwrap() > 0);
        let (code, r, _) = run(&["prove", &out_s]);
        assert_eq!((code, r["status"].as_str()), (exit, Some(status)), "{query}");
    }
}

#[test]
fn vocabulary_over_several_documents() {
    let (code, r, _) = run(&["vocabulary", &p("article-1"), &p("case-1")]);
    assert_eq!(code, 0);
    let smoke = r["entries"].as_array().unwrap().iter().find(|e| e["name"] == "smoke").unwrap();
    let docs: Vec<&str> = smoke["occurrences"]
        .as_array()
        .unwrap()
        .iter()
        .map(|o| o["document"].as_str().unwrap())
        .collect();
    assert!(docs.contains(&"article-1") && docs.contains(&"case-1"));
}

#[test]
fn usage_and_validation_errors_exit_with_three() {
    assert_eq!(run(&["bogus"]).0, 3);
    assert_eq!(run(&["check"]).0, 3);
    assert_eq!(run(&["--help"]).0, 0);
    let (code, _, err) = run(&["check", "/nonexistent/doc.json"]);
    assert_eq!(code, 3);
    assert!(err.contains("io_error"));
    let (code, _, err) = run(&["--limits-ms", "0", "check", &p("article-1")]);
    assert_eq!(code, 3);
    assert!(err.contains("invalid_limits"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"id\": \"x\",\n \"title\": }").unwrap();
    let (code, _, err) = run(&["check", &bad.to_string_lossy()]);
    assert_eq!(code, 3);
    let e: Value = serde_json::from_str(&err).unwrap();
    assert_eq!((e["code"].as_str(), e["line"].as_u64()), (Some("invalid_document"), Some(2)));

    let (code, _, err) = run(&["query", &p("article-1"), &p("article-1")]);
    assert_eq!(code, 3);
    assert!(err.contains("wrong_document_kind"));
}

#[test]
fn binary_reports_on_stdout_and_sets_the_exit_status() {
    let bin = env!("CARGO_BIN_EXE_deontix");
    let out = Command::new(bin)
        .args(["query", &p("case-1"), &p("article-1")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["query"], "Case 1");
    let out = Command::new(bin).arg("check").arg(Path::new("/nonexistent")).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
}
