use std::process::Command;

use serde_json::Value;

fn qident(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qident"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn run_in_process(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("qident").chain(args.iter().copied());
    let code = qident_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn ghz_table_text() {
    let (code, out, err) = qident(&["ghz-table", "--format", "text"]);
    assert_eq!(code, 0, "{err}");
    let ends: Vec<&str> = out
        .lines()
        .skip(1)
        .filter_map(|l| l.split_whitespace().last())
        .collect();
    assert_eq!(ends, ["+1", "+1", "+1", "-1"]);
}

#[test]
fn ghz_table_csv() {
    let (code, out, _) = qident(&["--format", "csv", "ghz-table"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "row,context,measured,target");
    assert!(lines[4].starts_with("4,XXX,"));
    assert!(lines[4].ends_with(",-1"));
}

#[test]
fn enumerate_noncontextual_json() {
    let (code, out, _) = qident(&["enumerate", "--model", "noncontextual", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["scenario"], "enumerate");
    assert_eq!(v["results"]["count"], 0);
    assert_eq!(v["results"]["space"], 64);
    assert!(v["version"].is_string());
}

#[test]
fn enumerate_identity_lists_capped_solutions() {
    let (code, out, _) = qident(&["enumerate", "--model", "identity", "--format", "json", "--max-list", "2"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["results"]["space"], 82944);
    assert_eq!(v["results"]["solutions"].as_array().unwrap().len(), 2);
    let first = &v["results"]["solutions"][0]["assignment"];
    assert!(first["arrangements"]["1"].is_string());
    assert!(first["values"]["X_a"].is_i64());
}

#[test]
fn enumerate_custom_targets() {
    let (code, out, _) = run_in_process(&["enumerate", "--model", "noncontextual", "--targets", "+1,+1,+1,+1", "--format", "csv"]);
    assert_eq!(code, 0);
    let row = out.lines().nth(1).unwrap();
    assert!(row.starts_with("noncontextual,1 1 1 1,"));
    assert!(!row.contains(",0,"));
}

#[test]
fn enumerate_rejects_zero_target() {
    let (code, _, err) = run_in_process(&["enumerate", "--model", "contextual", "--targets", "1,1,0,-1"]);
    assert_eq!(code, 2);
    assert!(err.contains("target"));
}

#[test]
fn hom_subcommand() {
    let (code, out, _) = qident(&["hom", "--stats", "boson", "--t", "1/sqrt2", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["results"]["coincidence"].as_f64().unwrap().abs() < 1e-12);

    let (code, out, _) = run_in_process(&["hom", "--stats", "distinguishable", "--t", "0.7071067811865476", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!((v["results"]["coincidence"].as_f64().unwrap() - 0.5).abs() < 1e-12);

    let (code, _, err) = run_in_process(&["hom", "--stats", "fermion", "--t", "1.2"]);
    assert_eq!(code, 2);
    assert!(err.contains("transmissivity"));
}

#[test]
fn verify_paper_passes() {
    let (code, out, err) = qident(&["verify-paper"]);
    assert_eq!(code, 0, "{err}");
    assert!(!out.contains("[FAIL]"));
    assert!(out.contains("10/10 checks pass"));
}

#[test]
fn symm_check_passes() {
    let (code, out, _) = run_in_process(&["symm-check", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["results"]["passed"], true);
    assert_eq!(v["results"]["expectations"].as_array().unwrap().len(), 4);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(qident(&["bogus"]).0, 2);
    assert_eq!(qident(&["enumerate"]).0, 2);
    assert_eq!(qident(&["enumerate", "--model", "quantum"]).0, 2);
    assert_eq!(qident(&["ghz-table", "--format", "yaml"]).0, 2);
    assert_eq!(qident(&[]).0, 2);
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = run_in_process(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify-paper"));
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let path_str = path.to_str().unwrap();
    let (code, out, _) = qident(&["enumerate", "--model", "hybrid", "--max-list", "4", "--format", "json", "--out", path_str]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    let (_, direct, _) = qident(&["enumerate", "--model", "hybrid", "--max-list", "4", "--format", "json"]);
    assert_eq!(written, direct);
}

#[test]
fn identical_invocations_are_byte_identical() {
    for args in [
        &["ghz-table", "--format", "json"][..],
        &["verify-paper", "--format", "json"][..],
        &["enumerate", "--model", "contextual", "--format", "json", "--max-list", "10"][..],
    ] {
        assert_eq!(qident(args).1, qident(args).1);
    }
}

#[test]
fn unwritable_out_path() {
    let (code, _, err) = run_in_process(&["ghz-table", "--out", "/nonexistent-dir/x/y.txt"]);
    assert_eq!(code, 2);
    assert!(err.contains("cannot write"));
}
