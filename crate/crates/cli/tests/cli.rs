//! End-to-end tests of the `walksym` binary: golden outputs, exit codes,
//! and determinism across worker counts and seeds.

use std::fs;
use std::process::{Command, Output};

fn walksym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_walksym"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

fn code_of(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

#[test]
fn gen_emits_frozen_records() {
    let out = walksym(&["gen", "cycle", "4"]);
    assert_eq!(code_of(&out), 0);
    assert_eq!(stdout_of(&out), "Cl\n");

    let out = walksym(&["gen", "complete", "3"]);
    assert_eq!(stdout_of(&out), "Bw\n");

    let out = walksym(&["gen", "petersen"]);
    assert_eq!(code_of(&out), 0);
    assert_eq!(stdout_of(&out).trim().len(), 1 + 8); // header byte + 45 bits
}

#[test]
fn gen_rejects_bad_requests_as_usage_errors() {
    let out = walksym(&["gen", "dodecahedron"]);
    assert_eq!(code_of(&out), 1);
    assert!(stderr_of(&out).contains("unknown family"));

    let out = walksym(&["gen", "petersen", "3"]);
    assert_eq!(code_of(&out), 1);
    assert!(stderr_of(&out).contains("no parameters"));

    let out = walksym(&["gen", "cycle"]);
    assert_eq!(code_of(&out), 1);
}

#[test]
fn enumerate_lists_canonical_classes() {
    let out = walksym(&["enumerate", "3"]);
    assert_eq!(code_of(&out), 0);
    assert_eq!(stdout_of(&out), "BW\nBw\n");

    let out = walksym(&["enumerate", "4"]);
    assert_eq!(stdout_of(&out).lines().count(), 6);

    let out = walksym(&["enumerate", "9"]);
    assert_eq!(code_of(&out), 1);
}

#[test]
fn analyze_prints_a_text_report() {
    let out = walksym(&["analyze", "Bw"]);
    assert_eq!(code_of(&out), 0);
    let text = stdout_of(&out);
    assert!(text.contains("r_pi: 4/9"), "got: {text}");
    assert!(text.contains("regular: yes (degree 2)"));
    assert!(text.contains("distance_regular: yes {2;1}"));

    let out = walksym(&["analyze", "BW"]);
    let text = stdout_of(&out);
    assert!(text.contains("reversible: no"));
    assert!(text.contains("r_pi: -"));
    assert!(text.contains("max_hitting_asymmetry: 2"));
}

#[test]
fn analyze_emits_json() {
    let out = walksym(&["analyze", "Bw", "--json"]);
    assert_eq!(code_of(&out), 0);
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(value["r_pi"], "4/9");
    assert_eq!(value["reversible"], true);
    assert_eq!(value["n"], 3);
    assert_eq!(value["max_hitting_asymmetry"], "0");
}

#[test]
fn analyze_reports_data_errors_with_line_numbers() {
    let out = walksym(&["analyze", "B."]);
    assert_eq!(code_of(&out), 2);
    assert!(stderr_of(&out).contains("invalid graph6"));

    let out = walksym(&["analyze", "A?"]);
    assert_eq!(code_of(&out), 2);
    assert!(stderr_of(&out).contains("not connected"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.g6");
    fs::write(&path, "Bw\nB.\n").unwrap();
    let out = walksym(&["analyze", path.to_str().unwrap()]);
    assert_eq!(code_of(&out), 2);
    assert!(stderr_of(&out).contains(":2:"), "got: {}", stderr_of(&out));
}

#[test]
fn analyze_handles_multi_record_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pair.g6");
    fs::write(&path, "Bw\nCl\n").unwrap();
    let out = walksym(&["analyze", path.to_str().unwrap(), "--json"]);
    assert_eq!(code_of(&out), 0);
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(value.as_array().unwrap().len(), 2);
    assert_eq!(value[1]["r_pi"], "5/8");
}

#[test]
fn scan_is_deterministic_across_job_counts() {
    let dir = tempfile::tempdir().unwrap();
    let corpus_path = dir.path().join("n4.g6");
    let listing = walksym(&["enumerate", "4"]);
    // A disconnected record in the middle must be skipped with a warning.
    let body = format!("A?\n{}", stdout_of(&listing));
    fs::write(&corpus_path, body).unwrap();

    let out_a = dir.path().join("a.json");
    let out_b = dir.path().join("b.json");
    let run_a = walksym(&[
        "scan",
        corpus_path.to_str().unwrap(),
        "--filter",
        "walk_regular & !vertex_transitive",
        "--jobs",
        "1",
        "--out",
        out_a.to_str().unwrap(),
    ]);
    let run_b = walksym(&[
        "scan",
        corpus_path.to_str().unwrap(),
        "--filter",
        "walk_regular ∧ ¬vertex_transitive",
        "--jobs",
        "8",
        "--out",
        out_b.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&run_a), 0);
    assert_eq!(code_of(&run_b), 0);
    assert_eq!(stdout_of(&run_a), stdout_of(&run_b));
    assert_eq!(
        fs::read(&out_a).unwrap(),
        fs::read(&out_b).unwrap(),
        "summary files differ between job counts"
    );
    assert!(stderr_of(&run_a).contains("skipped 1 disconnected"));
    let text = stdout_of(&run_a);
    assert!(text.contains("records: 7"), "got: {text}");
    assert!(text.contains("filter walk_regular & !vertex_transitive: 0 match(es)"));
}

#[test]
fn scan_rejects_unknown_filters_and_missing_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.g6");
    fs::write(&path, "Bw\n").unwrap();
    let out = walksym(&["scan", path.to_str().unwrap(), "--filter", "shiny"]);
    assert_eq!(code_of(&out), 1);
    assert!(stderr_of(&out).contains("unknown property"));

    let out = walksym(&["scan", dir.path().join("absent.g6").to_str().unwrap()]);
    assert_eq!(code_of(&out), 2);
}

#[test]
fn spectrum_prints_ascending_values_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mix.g6");
    fs::write(&path, "A_\nBw\n").unwrap();
    let csv_path = dir.path().join("spectrum.csv");
    let out = walksym(&[
        "spectrum",
        path.to_str().unwrap(),
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&out), 0);
    assert_eq!(stdout_of(&out), "4/9 Bw\n1/2 A_\n");
    assert_eq!(
        fs::read_to_string(&csv_path).unwrap(),
        "value_num,value_den,witness_graph6\n4,9,Bw\n1,2,A_\n"
    );
}

#[test]
fn simulate_is_reproducible_and_shows_the_exact_value() {
    let args = [
        "simulate", "Bw", "--vertex", "0", "--steps", "2", "--trials", "20000", "--seed", "7",
    ];
    let first = walksym(&args);
    let second = walksym(&args);
    assert_eq!(code_of(&first), 0);
    assert_eq!(stdout_of(&first), stdout_of(&second));
    let text = stdout_of(&first);
    assert!(text.contains("exact: 1/2 = 0.500000"), "got: {text}");

    let other_seed = walksym(&[
        "simulate", "Bw", "--vertex", "0", "--steps", "2", "--trials", "20000", "--seed", "8",
    ]);
    assert_ne!(stdout_of(&first), stdout_of(&other_seed));
}

#[test]
fn simulate_validates_its_arguments() {
    let out = walksym(&[
        "simulate", "Bw", "--vertex", "9", "--steps", "2", "--trials", "10", "--seed", "1",
    ]);
    assert_eq!(code_of(&out), 1);
    assert!(stderr_of(&out).contains("out of range"));

    let out = walksym(&[
        "simulate", "Bw", "--vertex", "0", "--steps", "2", "--trials", "0", "--seed", "1",
    ]);
    assert_eq!(code_of(&out), 1);
}

#[test]
fn tables_render_exact_rationals() {
    let out = walksym(&["hitting", "BW"]);
    assert_eq!(code_of(&out), 0);
    let text = stdout_of(&out);
    assert!(text.contains("expected hitting times"));
    assert!(text.contains("4"), "got: {text}");

    let out = walksym(&["resistance", "Bw"]);
    let text = stdout_of(&out);
    assert!(text.contains("2/3"), "got: {text}");

    let out = walksym(&["hitting", "A?"]);
    assert_eq!(code_of(&out), 2);
}

#[test]
fn top_level_exit_codes() {
    let out = walksym(&["--help"]);
    assert_eq!(code_of(&out), 0);
    assert!(stdout_of(&out).contains("analyze"));

    let out = walksym(&["--version"]);
    assert_eq!(code_of(&out), 0);

    let out = walksym(&[]);
    assert_eq!(code_of(&out), 1);

    let out = walksym(&["frobnicate"]);
    assert_eq!(code_of(&out), 1);
}
