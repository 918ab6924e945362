use std::process::Command;

use integral_srg::cli::{CertifyReport, Envelope, SweepRow, SKIPPED_SIZE_BOUND, SWEEP_COLUMNS};
use integral_srg::lemmas::LemmaReport;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_integral-srg"));
    c.env_remove("INTEGRAL_SRG_WORKERS");
    c
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn certify_json() {
    let (code, stdout, _) = run(&["certify", "--q", "3", "--m", "4", "--format", "json"]);
    assert_eq!(code, 0);
    for needle in [
        "\"is_srg\": true",
        "\"v\": 81",
        "\"k\": 56",
        "\"lambda\": 37",
        "\"mu\": 42",
        "\"schema\": 1",
    ] {
        assert!(stdout.contains(needle), "missing {needle}");
    }
    let parsed: Envelope<CertifyReport> = serde_json::from_str(&stdout).unwrap();
    assert_eq!(integral_srg::cli::to_json(&parsed).unwrap(), stdout);
}

#[test]
fn reports_are_deterministic() {
    let a = run(&["certify", "--q", "5", "--m", "4", "--workers", "1"]);
    let b = run(&["certify", "--q", "5", "--m", "4", "--workers", "4"]);
    assert_eq!(a.1, b.1);
}

#[test]
fn lemma_report() {
    let (code, stdout, _) = run(&["lemma", "--q", "3", "--m", "4"]);
    assert_eq!(code, 0);
    let parsed: Envelope<LemmaReport> = serde_json::from_str(&stdout).unwrap();
    let r = &parsed.report;
    assert_eq!(
        (
            r.bracket0.oracle,
            r.sum_brackets.total.oracle,
            r.r.oracle,
            r.ell.oracle,
            r.sigma0.oracle
        ),
        (18, 30, 12, 12, 12)
    );
    assert_eq!(r.mu_assembled, 42);
    assert_eq!(integral_srg::cli::to_json(&parsed).unwrap(), stdout);
}

#[test]
fn even_q_is_a_usage_error() {
    let (code, stdout, stderr) = run(&["certify", "--q", "4", "--m", "4"]);
    assert_eq!(code, 2);
    assert!(stdout.is_empty());
    assert!(stderr.contains("q must be odd"));
}

#[test]
fn other_usage_errors() {
    assert_eq!(run(&["certify", "--q", "3", "--m", "3"]).0, 2);
    assert_eq!(run(&["certify", "--q", "15", "--m", "4"]).0, 2);
    assert_eq!(run(&["certify", "--q", "3"]).0, 2);
    assert_eq!(run(&["lemma", "--q", "3", "--m", "2"]).0, 2);
    assert_eq!(
        run(&["certify", "--q", "3", "--m", "4", "--workers", "0"]).0,
        2
    );
    assert_eq!(
        run(&["certify", "--q", "3", "--m", "8", "--size-bound", "100"]).0,
        2
    );
}

#[test]
fn workers_from_environment() {
    let out = bin()
        .env("INTEGRAL_SRG_WORKERS", "2")
        .args(["params", "--q", "3", "--m", "4", "--format", "text"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("validated    v = 81, k = 56, lambda = 37, mu = 42"));
}

#[test]
fn sweep_csv() {
    let (code, stdout, _) = run(&[
        "sweep",
        "--q",
        "3,5,7",
        "--m",
        "4",
        "--format",
        "csv",
        "--no-timing",
    ]);
    assert_eq!(code, 0);
    let mut lines = stdout.lines();
    assert_eq!(lines.next().unwrap(), SWEEP_COLUMNS.join(","));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.split(',').nth(7) == Some("true")));
    assert_eq!(rows[0], "3,4,ok,81,56,37,42,true,true,true,true,0");
}

#[test]
fn sweep_skips_oversized_cells() {
    let (code, stdout, _) = run(&[
        "sweep",
        "--q",
        "3,5",
        "--m",
        "4",
        "--size-bound",
        "100",
        "--format",
        "json",
        "--no-timing",
    ]);
    assert_eq!(code, 0);
    let parsed: Envelope<Vec<SweepRow>> = serde_json::from_str(&stdout).unwrap();
    assert_eq!(parsed.report[1].status, SKIPPED_SIZE_BOUND);
    assert_eq!(integral_srg::cli::to_json(&parsed).unwrap(), stdout);
}

#[test]
fn empty_sweep() {
    let (code, stdout, _) = run(&["sweep", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, format!("{}\n", SWEEP_COLUMNS.join(",")));
    let (code, stdout, _) = run(&["sweep"]);
    assert_eq!(code, 0);
    let parsed: Envelope<Vec<SweepRow>> = serde_json::from_str(&stdout).unwrap();
    assert!(parsed.report.is_empty());
}

#[test]
fn export_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("paley9.g6");
    let (code, _, _) = run(&[
        "export",
        "--q",
        "3",
        "--m",
        "2",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.len(), 1 + 36usize.div_ceil(6) + 1);
    assert!(text.starts_with('H'));
    assert!(text.ends_with('\n'));
}

#[test]
fn build_and_params_formats() {
    let (code, stdout, _) = run(&["build", "--q", "5", "--m", "4", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.lines().nth(1), Some("5,4,625,144,240,240,384,true"));
    let (code, stdout, _) = run(&["params", "--q", "5", "--m", "4", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("transcribed,625,389,263,240,false"));
    assert!(stdout.contains("validated,625,384,233,240,true"));
}
