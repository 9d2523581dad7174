//! End-to-end checks of the binary: exit codes, artifact contents, and
//! byte-level determinism of reruns.
//!
//! Scans here run at --grid-n 256 to keep the suite quick; the full-grid
//! behavior is covered by the acceptance suite.

use serde_json::Value;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shiftframe"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn json(dir: &Path, name: &str) -> Value {
    let text = fs::read_to_string(dir.join(name)).expect("artifact exists");
    serde_json::from_str(&text).expect("artifact is valid JSON")
}

#[test]
fn scan_rank_meets_expectation_and_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path();
    let out = run(&[
        "scan-rank",
        "--family",
        config("theorem3_riesz.json").to_str().unwrap(),
        "--grid-n",
        "256",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let report = json(out_dir, "report.json");
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["command"], "scan-rank");
    assert_eq!(report["expected"], "RieszBasis");
    assert_eq!(report["expectation_met"], true);
    assert_eq!(report["rank_criteria_agree"], true);
    assert_eq!(report["report"]["classification"], "RieszBasis");
    assert_eq!(report["report"]["rank_constant"], 3);

    let csv = fs::read_to_string(out_dir.join("rank_profile.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "schema_version,xi,guarded,numeric_rank,structural_rank,exact_pattern_rank,gram_rank,eig_min_nonzero,eig_max"
    );
    let mut rows = 0;
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 9);
        assert_eq!(cells[0], "1");
        if cells[2] == "0" {
            assert_eq!(cells[3], "3", "non-guard numeric rank at xi={}", cells[1]);
            assert_eq!(cells[4], "3", "non-guard structural rank at xi={}", cells[1]);
        }
        rows += 1;
    }
    assert!(rows >= 256, "expected at least the base grid, got {rows} rows");
}

#[test]
fn scan_rank_accepts_an_expected_nonconstant_profile() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "scan-rank",
        "--family",
        config("theorem3_nonconstant.json").to_str().unwrap(),
        "--grid-n",
        "256",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let report = json(dir.path(), "report.json");
    assert_eq!(report["report"]["classification"], "NotClosed");
    let distinct = report["report"]["distinct_nonguard_ranks"].as_array().unwrap();
    assert!(distinct.len() >= 2, "distinct ranks: {distinct:?}");
}

#[test]
fn scan_rank_mismatch_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("wrong.json");
    fs::write(
        &cfg,
        r#"{"family": {"config": "theorem3", "k": [0, 1], "epsilon": 0.2}, "expect": "RieszBasis"}"#,
    )
    .unwrap();
    let out = run(&[
        "scan-rank",
        "--family",
        cfg.to_str().unwrap(),
        "--grid-n",
        "256",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 3);
    // the artifact still records what was scanned
    let report = json(dir.path(), "report.json");
    assert_eq!(report["expectation_met"], false);
    assert_eq!(report["report"]["classification"], "NotClosed");
}

#[test]
fn malformed_configurations_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out_arg = dir.path().to_str().unwrap().to_string();

    // missing file
    let out = run(&["scan-rank", "--family", "/nonexistent/x.json", "--out", &out_arg]);
    assert_eq!(code(&out), 2);

    // unparseable JSON
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{ not json").unwrap();
    let out = run(&["scan-rank", "--family", bad.to_str().unwrap(), "--out", &out_arg]);
    assert_eq!(code(&out), 2);

    // unknown field
    let unknown = dir.path().join("unknown.json");
    fs::write(
        &unknown,
        r#"{"family": {"config": "theorem3", "k": [0], "epsilon": 0.1}, "grd": 5}"#,
    )
    .unwrap();
    let out = run(&["scan-rank", "--family", unknown.to_str().unwrap(), "--out", &out_arg]);
    assert_eq!(code(&out), 2);

    // override violating the grid floor
    let out = run(&[
        "scan-rank",
        "--family",
        config("theorem3_riesz.json").to_str().unwrap(),
        "--grid-n",
        "32",
        "--out",
        &out_arg,
    ]);
    assert_eq!(code(&out), 2);

    // epsilon override on a family without that parameter
    let out = run(&[
        "scan-rank",
        "--family",
        config("spline_k1_r3.json").to_str().unwrap(),
        "--epsilon",
        "0.1",
        "--out",
        &out_arg,
    ]);
    assert_eq!(code(&out), 2);

    // bad norm exponent
    let out = run(&[
        "scan-rank",
        "--family",
        config("theorem3_riesz.json").to_str().unwrap(),
        "--p",
        "3",
        "--out",
        &out_arg,
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn frame_bounds_records_positive_riesz_lower_bound() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "frame-bounds",
        "--family",
        config("spline_k1_r3.json").to_str().unwrap(),
        "--grid-n",
        "256",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let report = json(dir.path(), "report.json");
    assert_eq!(report["command"], "frame-bounds");
    let lower = report["lower_frame_bound"].as_f64().unwrap();
    let upper = report["upper_frame_bound"].as_f64().unwrap();
    assert!(lower > 0.0 && upper > lower, "bounds [{lower}, {upper}]");

    let csv = fs::read_to_string(dir.path().join("frame_bounds.csv")).unwrap();
    assert!(csv.starts_with("schema_version,xi,guarded,eig_min_nonzero,eig_max\n"));
    assert!(csv.lines().count() > 256);
}

#[test]
fn frame_bounds_on_non_closed_family_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "frame-bounds",
        "--family",
        config("claim_section3.json").to_str().unwrap(),
        "--grid-n",
        "256",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 4);
    // the per-frequency data is still written for inspection
    let report = json(dir.path(), "report.json");
    assert_eq!(report["report"]["classification"], "NotClosed");
    assert!(dir.path().join("frame_bounds.csv").exists());
}

#[test]
fn spline_check_validates_the_shipped_family() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "spline-check",
        "--family",
        config("spline_k1_r3.json").to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report = json(dir.path(), "oracle_report.json");
    assert_eq!(report["pass"], true);
    assert_eq!(report["breaches"].as_array().unwrap().len(), 0);
    let rows = report["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for row in rows {
        let conv = row["convolution_max_dev"].as_f64().unwrap();
        let tol = row["convolution_tolerance"].as_f64().unwrap();
        assert!(conv < tol);
        assert!(row["fourier_max_dev"].as_f64().unwrap() < 1e-6);
        assert!(row["hat_at_zero_dev"].as_f64().unwrap() < 1e-10);
        assert!(row["mass_dev"].as_f64().unwrap() < 1e-8);
    }
}

#[test]
fn spline_check_rejects_non_spline_families() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "spline-check",
        "--family",
        config("lemma_4_1.json").to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn reconstruct_round_trips_the_spline_family() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "reconstruct",
        "--family",
        config("spline_k1_r3.json").to_str().unwrap(),
        "--grid-n",
        "256",
        "--trials",
        "3",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report = json(dir.path(), "reconstruction_report.json");
    assert_eq!(report["classification"], "RieszBasis");
    assert_eq!(report["trials"].as_array().unwrap().len(), 3);
    let max_err = report["max_relative_l2_error"].as_f64().unwrap();
    assert!(max_err < 1e-6, "max relative error {max_err}");
}

#[test]
fn reconstruct_handles_a_redundant_frame() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "reconstruct",
        "--family",
        config("theorem_4_3_r2.json").to_str().unwrap(),
        "--grid-n",
        "256",
        "--trials",
        "2",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report = json(dir.path(), "reconstruction_report.json");
    assert_eq!(report["classification"], "Frame");
    let max_err = report["max_relative_l2_error"].as_f64().unwrap();
    assert!(max_err < 1e-6, "max relative error {max_err}");
    // four generators span a rank-2 fiber: redundant, yet reconstructible
    assert_eq!(report["rank_constant"], 2);
}

#[test]
fn reconstruct_on_non_closed_family_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "reconstruct",
        "--family",
        config("claim_section3.json").to_str().unwrap(),
        "--grid-n",
        "256",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 4);
    let report = json(dir.path(), "reconstruction_report.json");
    assert_eq!(report["classification"], "NotClosed");
    assert_eq!(report["trials"].as_array().unwrap().len(), 0);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out_dir in [&a, &b] {
        let out = run(&[
            "scan-rank",
            "--family",
            config("theorem3_riesz.json").to_str().unwrap(),
            "--grid-n",
            "256",
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
        let out = run(&[
            "reconstruct",
            "--family",
            config("spline_k1_r3.json").to_str().unwrap(),
            "--grid-n",
            "256",
            "--trials",
            "2",
            "--seed",
            "7",
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
    }
    for name in ["report.json", "rank_profile.csv", "reconstruction_report.json"] {
        let first = fs::read(a.join(name)).unwrap();
        let second = fs::read(b.join(name)).unwrap();
        assert_eq!(first, second, "{name} differs between reruns");
    }
}
