use std::process::{Command, Output};

use serde_json::Value;

fn permstat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permstat")).args(args).output().expect("binary runs")
}

fn json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("every stdout line is JSON"))
        .collect()
}

#[test]
fn certify_f4_reports_kernel_dimensions() {
    let out = permstat(&["certify", "--kind", "F", "--n", "4", "--seeds", "1,2"]);
    assert_eq!(out.status.code(), Some(0));
    let report = &json_lines(&out)[0];
    assert_eq!(report["verdict"], "PASS");
    let mults: Vec<u64> = report["eigen"].as_array().unwrap().iter().map(|e| e["mult"].as_u64().unwrap()).collect();
    assert_eq!(mults, vec![1, 9, 14]);
    for e in report["eigen"].as_array().unwrap() {
        assert!(e["kernel_dims"].as_array().unwrap().iter().all(|d| *d == e["mult"]));
    }
}

#[test]
fn certify_if3_with_one_seed() {
    let out = permstat(&["certify", "--kind", "IF", "--n", "3", "--seeds", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_lines(&out)[0]["seeds"], serde_json::json!([7]));
}

#[test]
fn certify_symbolic_attaches_minimal_polynomial() {
    let out = permstat(&["certify", "--kind", "F", "--n", "4", "--symbolic"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_lines(&out)[0]["minimal_polynomial"]["verdict"], true);
}

#[test]
fn wrong_spectrum_fails_with_exit_one_and_json() {
    let out = permstat(&["certify", "--kind", "F", "--n", "4", "--spectrum", "24*z:1,0:23"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_lines(&out)[0]["verdict"], "FAIL");
}

#[test]
fn fix_square_lemma_shows_erratum() {
    let out = permstat(&["lemmas", "--n", "4", "--suite", "fixsq"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("48"));
    assert!(text.contains("KNOWN_ERRATUM"));
}

#[test]
fn bad_flags_exit_two() {
    assert_eq!(permstat(&["certify", "--kind", "NOPE", "--n", "4"]).status.code(), Some(2));
    assert_eq!(permstat(&["certify", "--n", "4"]).status.code(), Some(2));
    assert_eq!(permstat(&["lemmas", "--n", "4", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(permstat(&["certify", "--kind", "F", "--n", "4", "--spectrum", "z"]).status.code(), Some(2));
}

#[test]
fn unregistered_degree_exits_two() {
    assert_eq!(permstat(&["certify", "--kind", "F", "--n", "2"]).status.code(), Some(2));
}

#[test]
fn oversized_certification_exits_three() {
    assert_eq!(permstat(&["certify", "--kind", "F", "--n", "7"]).status.code(), Some(3));
    assert_eq!(permstat(&["matrix", "--kind", "F", "--n", "8"]).status.code(), Some(3));
}

#[test]
fn output_is_deterministic_without_timing() {
    let args = ["--no-timing", "certify", "--kind", "DIF", "--n", "4"];
    let (a, b) = (permstat(&args), permstat(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json_lines(&a)[0]["elapsed_ms"], 0);
}

#[test]
fn thread_count_does_not_change_results() {
    let one = permstat(&["--no-timing", "--jobs", "1", "specht", "--n", "5"]);
    let many = permstat(&["--no-timing", "--jobs", "4", "specht", "--n", "5"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn matrix_dump_streams_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("if3.csv");
    let out = permstat(&["matrix", "--kind", "IF", "--n", "3", "--dump", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_lines(&out)[0]["dim"], 6);
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv.lines().count(), 7);
}

#[test]
fn characters_use_the_cache_directory() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_permstat"))
            .args(["--no-timing", "characters", "--n", "6"])
            .env("PERMSTAT_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    assert_eq!(first.status.code(), Some(0));
    assert!(dir.path().join("characters.json").exists());
    assert_eq!(first.stdout, run().stdout);
}

#[test]
fn property_suite_runs_in_one_invocation() {
    let out = permstat(&["properties"]);
    assert_eq!(out.status.code(), Some(0));
    let report = &json_lines(&out)[0];
    assert_eq!(report["verdict"], "PASS");
    let suites: std::collections::BTreeSet<&str> =
        report["checks"].as_array().unwrap().iter().map(|c| c["suite"].as_str().unwrap()).collect();
    assert_eq!(suites.len(), 4);
}
