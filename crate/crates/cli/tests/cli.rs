//! End-to-end tests of the binary: exit codes, JSON outputs, round-trips.

use std::path::Path;
use std::process::{Command, Output};

fn zetalab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zetalab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn model_toral_emits_ensemble_and_spectrum() {
    let dir = std::env::temp_dir().join("zetalab_test_model");
    let _ = std::fs::remove_dir_all(&dir);
    let out = zetalab(&[
        "model",
        "toral",
        "--matrix",
        "2,1,1,1",
        "--max-period",
        "10",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let ens_text = std::fs::read_to_string(dir.join("ensemble.json")).unwrap();
    let ens = zetalab_core::orbit_models::OrbitEnsemble::from_json(&ens_text).unwrap();
    let counts: Vec<u64> = ens.records.iter().map(|r| r.count).collect();
    assert_eq!(counts, vec![1, 2, 5, 10, 24, 50, 120, 270, 640, 1500]);
    assert!(ens.records.iter().all(|r| r.index == -1));

    let spec_text = std::fs::read_to_string(dir.join("spectrum.json")).unwrap();
    let spec = zetalab_core::regdet::GradedSpectrum::from_json(&spec_text).unwrap();
    let mut bases: Vec<f64> = spec.degrees[1].ladders.iter().map(|l| l.base.re).collect();
    bases.sort_by(f64::total_cmp);
    assert!((bases[0] + 0.9624236501192069).abs() < 1e-12);
    assert!((bases[1] - 0.9624236501192069).abs() < 1e-12);
}

#[test]
fn model_morse_invalid_counts_exit_2() {
    let out = zetalab(&["model", "morse", "--genus", "2", "--critical", "1,3,1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("Euler characteristic"), "{err}");
}

#[test]
fn model_morse_valid_summary() {
    let out = zetalab(&["model", "morse", "--genus", "2", "--critical", "1,4,1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("minimal length m = 1"));
}

#[test]
fn verify_all_cat_map_passes() {
    let out = zetalab(&["verify", "all", "--matrix", "2,1,1,1", "--nu-max", "400"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert_eq!(stdout(&out).matches("[PASS]").count(), 5);
}

#[test]
fn verify_xiorbit_low_z_exit_2() {
    let out = zetalab(&["verify", "xiorbit", "--matrix", "2,1,1,1", "--z", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_rejects_unknown_suite() {
    let out = zetalab(&["verify", "nonsense", "--matrix", "2,1,1,1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn zeta_grid_flags_out_of_region_rows() {
    let out = zetalab(&[
        "zeta",
        "--matrix",
        "2,1,1,1",
        "--s-grid",
        "0.5:2.5:3",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().next().unwrap().starts_with("s_re,s_im,value_re"));
    assert!(text.contains("out-of-region"));
    assert!(text.contains(",ok"));
}

/// Emitted ensembles re-ingest to bit-identical downstream values.
#[test]
fn ensemble_round_trip_bit_exact() {
    let dir = std::env::temp_dir().join("zetalab_test_roundtrip");
    let _ = std::fs::remove_dir_all(&dir);
    let out = zetalab(&[
        "model",
        "toral",
        "--matrix",
        "2,1,1,1",
        "--max-period",
        "25",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let from_model = zetalab(&[
        "zeta",
        "--matrix",
        "2,1,1,1",
        "--max-period",
        "25",
        "--s-grid",
        "2:4:9,0:1:3",
        "--format",
        "csv",
    ]);
    let from_file = zetalab(&[
        "zeta",
        "--ensemble",
        dir.join("ensemble.json").to_str().unwrap(),
        "--s-grid",
        "2:4:9,0:1:3",
        "--format",
        "csv",
    ]);
    assert!(from_model.status.success() && from_file.status.success());
    // The file-backed run has no closed form; compare the value columns
    // byte for byte.
    let strip = |text: String| -> Vec<String> {
        text.lines()
            .skip(1)
            .map(|l| l.split(',').take(5).collect::<Vec<_>>().join(","))
            .collect()
    };
    assert_eq!(strip(stdout(&from_model)), strip(stdout(&from_file)));
}

#[test]
fn model_synthetic_records() {
    let out = zetalab(&[
        "model",
        "synthetic",
        "--records",
        "1.0:1:-1,0.6931471805599453:3:1",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let ens = zetalab_core::orbit_models::OrbitEnsemble::from_json(&stdout(&out)).unwrap();
    assert_eq!(ens.records.len(), 2);
    assert!((ens.min_length - 0.6931471805599453).abs() < 1e-16);
    assert!(ens.is_complete());
}

#[test]
fn verify_report_json_written() {
    let dir = std::env::temp_dir().join("zetalab_test_report");
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = zetalab(&[
        "verify",
        "lefschetz",
        "--matrix",
        "3,1,2,1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["pass"], serde_json::Value::Bool(true));
    // The lefschetz detail is a JSON list of {k, lhs, rhs, pass} rows with
    // exact decimal strings.
    assert!(report["suites"][0]["detail"][0]["lhs"].is_string());
    assert_eq!(report["suites"][0]["detail"][0]["k"], 1);
}

#[test]
fn zeta_grid_rows_agree_within_bounds() {
    let out = zetalab(&[
        "zeta",
        "--matrix",
        "2,1,1,1",
        "--max-period",
        "25",
        "--s-grid",
        "2:4:9",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    for line in stdout(&out).lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[7], "ok");
        let (vr, vi): (f64, f64) = (cols[2].parse().unwrap(), cols[3].parse().unwrap());
        let bound: f64 = cols[4].parse().unwrap();
        let (cr, ci): (f64, f64) = (cols[5].parse().unwrap(), cols[6].parse().unwrap());
        let diff = ((vr - cr).powi(2) + (vi - ci).powi(2)).sqrt();
        assert!(diff <= bound, "{line}");
    }
}

#[test]
fn deterministic_output_across_runs() {
    let run = || {
        stdout(&zetalab(&[
            "zeta",
            "--matrix",
            "2,1,1,1",
            "--s-grid",
            "2:3:5,0.2:0.8:2",
            "--format",
            "csv",
        ]))
    };
    assert_eq!(run(), run());
}

#[test]
fn thread_cap_env_respected() {
    let out = Command::new(env!("CARGO_BIN_EXE_zetalab"))
        .env("ZETALAB_THREADS", "1")
        .args(["verify", "traceformula", "--matrix", "2,1,1,1", "--nu-max", "200"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn out_path_with_extension_is_a_file() {
    let dir = std::env::temp_dir().join("zetalab_test_csvfile");
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("rows.csv");
    let out = zetalab(&[
        "zeta",
        "--matrix",
        "2,1,1,1",
        "--s-grid",
        "2:4:3",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(Path::new(&path).exists());
}
