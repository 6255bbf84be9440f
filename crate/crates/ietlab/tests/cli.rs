//! End-to-end checks of the command-line front end: exit-code contract,
//! output schemas, and byte-identical determinism.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ietlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn family_happy_path_and_usage_error() {
    let ok = run(&["family", "--n", "6", "--a", "2", "--c", "1"]);
    assert_eq!(ok.status.code(), Some(0));
    let text = stdout(&ok);
    assert!(text.contains("\"oracle\": \"equal\""));
    assert!(text.contains("\"verdict\": \"pass\""));
    assert!(text.contains("\"cycle_word\""));

    let bad = run(&["family", "--n", "3", "--a", "1", "--c", "1"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn family_odd_variant() {
    let ok = run(&["family", "--n", "5", "--a", "2", "--c", "2"]);
    assert_eq!(ok.status.code(), Some(0));
    let text = stdout(&ok);
    assert!(text.contains("\"odd_variant\": true"));
    assert!(text.contains("\"closed_loop\": true"));
}

#[test]
fn induce_matches_cycles() {
    let out = run(&["induce", "--n", "6", "--p", "7", "--c1", "8", "--m", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("\"prefix_match_cycles\": 3"));
    assert!(text.contains("\"full_match\": true"));
    assert!(text.contains("tie at letter"));
}

#[test]
fn induce_trivial_at_m_zero() {
    let out = run(&["induce", "--n", "6", "--p", "7", "--c1", "8", "--m", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("\"prefix_match_cycles\": 0"));
}

#[test]
fn measures_json_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = dir.path().join("a.json");
    let p2 = dir.path().join("b.json");
    let args = [
        "measures", "--n", "6", "--p", "8", "--c1", "64", "--m", "4", "--levels", "2",
    ];
    let out1 = run(&[&args[..], &["--out", p1.to_str().unwrap()]].concat());
    let out2 = run(&[&args[..], &["--out", p2.to_str().unwrap()]].concat());
    assert_eq!(out1.status.code(), Some(0));
    assert_eq!(out2.status.code(), Some(0));
    let b1 = std::fs::read(&p1).unwrap();
    let b2 = std::fs::read(&p2).unwrap();
    assert!(!b1.is_empty());
    assert_eq!(b1, b2, "identical configs must produce byte-identical files");
    let text = String::from_utf8(b1).unwrap();
    assert!(text.contains("\"partition_of_unity\": true"));
    assert!(text.contains("\"telescoping\": true"));
}

#[test]
fn measures_csv_schema() {
    let out = run(&[
        "measures", "--n", "6", "--p", "7", "--c1", "8", "--m", "1", "--levels", "1", "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("j,k,i,numerator,denominator\n"));
    // λ_3(I_3^{(0)}) = 57/77 at these parameters
    assert!(text.contains("3,0,3,57,77"));
}

#[test]
fn lemmas_pass_and_fail_exit_codes() {
    let ok = run(&[
        "lemmas", "--n", "6", "--p", "24", "--c1", "576", "--m", "4", "--levels", "2",
    ]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("\"all_pass\": true"));

    // at K = m the tails are indicator vectors and the strict inequalities
    // of L6 degenerate; the suite must report that honestly with exit 1
    let fail = run(&[
        "lemmas", "--n", "6", "--p", "24", "--c1", "576", "--m", "2", "--levels", "2",
    ]);
    assert_eq!(fail.status.code(), Some(1));
    let text = stdout(&fail);
    assert!(text.contains("\"all_pass\": false"));
    assert!(text.contains("\"lhs\""));
}

#[test]
fn dimension_csv_and_bad_pair() {
    let out = run(&[
        "dimension", "--n", "6", "--p", "8", "--c1", "64", "--m", "6", "--levels", "4", "--i",
        "3", "--j", "5", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("k,lower,upper,gap_bound,lambda_i,lambda_j,b\n"));
    assert_eq!(text.lines().count(), 5); // header + K rows

    let bad = run(&[
        "dimension", "--n", "6", "--p", "8", "--c1", "64", "--m", "6", "--levels", "4", "--i",
        "3", "--j", "3",
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn dimension_json_invariants() {
    let out = run(&[
        "dimension", "--n", "6", "--p", "8", "--c1", "64", "--m", "8", "--levels", "6", "--i",
        "6", "--j", "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("\"upper_le_one\": true"));
    assert!(text.contains("\"argmin_at_seed\": true"));
    assert!(text.contains("\"liminf_upper\""));
}

#[test]
fn oracle_grid_and_word() {
    let single = run(&["oracle", "--n", "5", "--a", "2", "--c", "2"]);
    assert_eq!(single.status.code(), Some(0));
    assert!(stdout(&single).contains("\"equal\": true"));

    let word = run(&["oracle", "--n", "6", "--word", "0 1 1 0^3"]);
    assert_eq!(word.status.code(), Some(0));
    let text = stdout(&word);
    assert!(text.contains("\"word_canonical\": \"0 1^2 0^3\""));
    assert!(text.contains("\"letters\": \"6\""));

    let bad = run(&["oracle", "--n", "6", "--word", "0^x"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn schedule_constraint_errors_are_usage_errors() {
    let bad_p = run(&["measures", "--n", "6", "--p", "6", "--c1", "49", "--m", "2"]);
    assert_eq!(bad_p.status.code(), Some(2));
    let bad_c = run(&["measures", "--n", "6", "--p", "7", "--c1", "7", "--m", "2"]);
    assert_eq!(bad_c.status.code(), Some(2));
}
