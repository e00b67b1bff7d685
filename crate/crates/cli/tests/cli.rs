//! End-to-end tests of the binary: output shapes and the exit-code contract
//! (0 success, 1 failed certification/verification, 2 malformed input,
//! 3 cap violations).

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_subtrans"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).to_string()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn write_temp(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

const SQUARE: &str =
    r#"{"d": 2, "points": [["1","0"],["0","1"],["-1","0"],["0","-1"]], "spherical": true}"#;

const OCTAHEDRON_SUBSET: &str = r#"{"d": 3, "points": [
    ["1","0","0"], ["0","1","0"], ["0","0","1"], ["-1","0","0"], ["0","-1","0"]
], "spherical": true}"#;

#[test]
fn phi_square() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_temp(dir.path(), "square.json", SQUARE);
    let out = run(&["phi", "--input", input.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout(&out).trim(), "-1 1");
}

#[test]
fn phi_last_point_equal_to_first() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"{"d": 2, "points": [["1","0"],["0","1"],["-1","0"],["1","0"]]}"#;
    let input = write_temp(dir.path(), "c.json", config);
    let out = run(&["phi", "--input", input.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout(&out).trim(), "0 0");
}

#[test]
fn phi_degenerate_prefix_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"{"d": 2, "points": [["0","0"],["1","0"],["2","0"],["0","1"]]}"#;
    let input = write_temp(dir.path(), "c.json", config);
    let out = run(&["phi", "--input", input.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("degenerate"));
}

#[test]
fn check_square_against_c4_reports_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_temp(dir.path(), "square.json", SQUARE);
    let out = run(&[
        "check",
        "--input",
        input.to_str().unwrap(),
        "--group",
        "c4:rotation2d",
        "--exhaustive",
    ]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("alpha: -1 1"), "{text}");
    assert!(text.contains("(1, 2, 3)"), "{text}");
    assert!(!text.contains("none found"), "{text}");
}

#[test]
fn check_octahedron_subset_first_witness() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_temp(dir.path(), "oct.json", OCTAHEDRON_SUBSET);
    let out = run(&[
        "check",
        "--input",
        input.to_str().unwrap(),
        "--group",
        "hyperoctahedral:3",
        "--first",
    ]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("witnessing tuples: 1"), "{}", stdout(&out));
}

#[test]
fn check_trivial_group_finds_none() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_temp(dir.path(), "square.json", SQUARE);
    let out = run(&[
        "check",
        "--input",
        input.to_str().unwrap(),
        "--group",
        "cyclic:1:regular",
    ]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("none found"));
}

#[test]
fn check_malformed_input_exits_2_naming_field() {
    let dir = tempfile::tempdir().unwrap();
    let bad = r#"{"d": 2, "points": [["1","0"],["0","1"],["-1","0"],["0","oops"]]}"#;
    let input = write_temp(dir.path(), "bad.json", bad);
    let out = run(&[
        "check",
        "--input",
        input.to_str().unwrap(),
        "--group",
        "c4:rotation2d",
    ]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("points"), "{}", stderr(&out));
}

#[test]
fn check_missing_file_exits_2() {
    let out = run(&[
        "check",
        "--input",
        "/nonexistent/nope.json",
        "--group",
        "c4:rotation2d",
    ]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn certify_c4_all_pass() {
    let out = run(&["certify", "--group", "c4:rotation2d", "--d", "2", "--exhaustive"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("certified 64/64"), "{}", stdout(&out));
}

#[test]
fn certify_symmetric3_all_pass() {
    let out = run(&["certify", "--group", "symmetric:3:natural", "--d", "2"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("certified 216/216"), "{}", stdout(&out));
}

#[test]
fn certify_trivial_group() {
    let out = run(&["certify", "--group", "cyclic:1:regular", "--d", "4"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("certified 1/1"));
}

#[test]
fn certify_tuple_cap_exits_3() {
    let out = run(&["certify", "--group", "symmetric:6:natural", "--d", "3"]);
    assert_eq!(exit_code(&out), 3);
    assert!(stderr(&out).contains("sampled"), "{}", stderr(&out));
}

#[test]
fn certify_bad_group_spec_exits_2() {
    let out = run(&["certify", "--group", "dihedral:7", "--d", "2"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn certify_cayley_table_group() {
    let dir = tempfile::tempdir().unwrap();
    let table = write_temp(dir.path(), "c3.cayley", "3\n1 2 3\n2 3 1\n3 1 2\n");
    let spec = format!("cayley:{}", table.display());
    let out = run(&["certify", "--group", &spec, "--d", "2"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("certified 27/27"), "{}", stdout(&out));
}

#[test]
fn certify_malformed_cayley_exits_2_with_triple() {
    let dir = tempfile::tempdir().unwrap();
    // Latin square with identity and inverses but no associativity
    let table = write_temp(
        dir.path(),
        "bad.cayley",
        "5\n1 2 3 4 5\n2 1 4 5 3\n3 5 1 2 4\n4 3 5 1 2\n5 4 2 3 1\n",
    );
    let spec = format!("cayley:{}", table.display());
    let out = run(&["certify", "--group", &spec, "--d", "2"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("triple"), "{}", stderr(&out));
}

#[test]
fn certify_explicit_generator_file() {
    let dir = tempfile::tempdir().unwrap();
    let gens = write_temp(dir.path(), "r90.txt", "0 -1\n1 0\n");
    let spec = format!("explicit:{}", gens.display());
    let out = run(&["certify", "--group", &spec, "--d", "2"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("certified 64/64"), "{}", stdout(&out));
}

#[test]
fn explicit_generator_file_with_rational_entries() {
    let dir = tempfile::tempdir().unwrap();
    // reflection across the line through (3/5, 4/5): orthogonal, order 2
    let gens = write_temp(dir.path(), "gen.txt", "3/5 4/5\n4/5 -3/5\n");
    let spec = format!("explicit:{}", gens.display());
    let out = run(&["certify", "--group", &spec, "--d", "2"]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("certified 8/8"), "{}", stdout(&out));
}

#[test]
fn explicit_infinite_order_generator_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    // rotation by the point (3/5, 4/5): orthogonal but generates an
    // infinite group, which the closure must refuse rather than chase
    let gens = write_temp(dir.path(), "gen.txt", "3/5 -4/5\n4/5 3/5\n");
    let spec = format!("explicit:{}", gens.display());
    let out = run(&["certify", "--group", &spec, "--d", "2"]);
    assert_eq!(exit_code(&out), 3, "{}", stderr(&out));
}

#[test]
fn explicit_non_orthogonal_generator_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let gens = write_temp(dir.path(), "bad.txt", "1 1\n0 1\n");
    let spec = format!("explicit:{}", gens.display());
    let out = run(&["certify", "--group", &spec, "--d", "2"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("not orthogonal"), "{}", stderr(&out));
}

#[test]
fn montecarlo_json_deterministic_up_to_timing() {
    let args = [
        "montecarlo",
        "--d",
        "2",
        "--trials",
        "10",
        "--seed",
        "7",
        "--denom-bound",
        "20",
        "--group",
        "c4:rotation2d",
        "--json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(exit_code(&a), 0);
    assert_eq!(exit_code(&b), 0);
    let mut ja: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    let mut jb: serde_json::Value = serde_json::from_str(&stdout(&b)).unwrap();
    ja["aggregate"]["elapsed_ms"] = 0.into();
    jb["aggregate"]["elapsed_ms"] = 0.into();
    assert_eq!(
        serde_json::to_string(&ja).unwrap(),
        serde_json::to_string(&jb).unwrap()
    );
}

#[test]
fn montecarlo_csv_rows() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("trials.csv");
    let out = run(&[
        "montecarlo",
        "--d",
        "2",
        "--trials",
        "4",
        "--seed",
        "1",
        "--denom-bound",
        "10",
        "--group",
        "c4:rotation2d",
        "--group",
        "cyclic:2:regular",
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "trial,group,witnesses,degenerate,millis");
    assert_eq!(lines.len(), 1 + 4 * 2);
}

#[test]
fn montecarlo_invalid_plan_exits_2() {
    let out = run(&[
        "montecarlo",
        "--d",
        "1",
        "--trials",
        "1",
        "--group",
        "c4:rotation2d",
    ]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("d"), "{}", stderr(&out));
}

#[test]
fn verify_report_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "montecarlo",
        "--d",
        "2",
        "--trials",
        "5",
        "--seed",
        "2",
        "--denom-bound",
        "15",
        "--group",
        "c4:rotation2d",
        "--json",
    ]);
    assert_eq!(exit_code(&out), 0);
    let report = write_temp(dir.path(), "report.json", &stdout(&out));
    let verify = run(&["verify-report", "--input", report.to_str().unwrap()]);
    assert_eq!(exit_code(&verify), 0);
    assert!(stdout(&verify).contains("failures: 0"));
}

#[test]
fn verify_report_rejects_tampered_counts() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "montecarlo",
        "--d",
        "2",
        "--trials",
        "3",
        "--seed",
        "4",
        "--denom-bound",
        "15",
        "--group",
        "c4:rotation2d",
        "--json",
    ]);
    let mut report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    report["aggregate"]["witnesses"] = 99.into();
    let path = write_temp(
        dir.path(),
        "tampered.json",
        &serde_json::to_string(&report).unwrap(),
    );
    let verify = run(&["verify-report", "--input", path.to_str().unwrap()]);
    assert_eq!(exit_code(&verify), 1);
}

#[test]
fn groups_list_shows_families() {
    let out = run(&["groups", "list"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    for family in ["cyclic", "symmetric", "hyperoctahedral", "c4:rotation2d", "cayley", "explicit"] {
        assert!(text.contains(family), "missing {family}: {text}");
    }
}
