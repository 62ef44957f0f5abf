use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;
use weyl_cli::csv::{parse_csv, write_csv, GridRow, HEADER};

fn weyl(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weyl"))
        .env("WEYL_CACHE_DIR", cache)
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn eval_at_origin_counts_terms() {
    let dir = TempDir::new().unwrap();
    let doc = json_of(&weyl(
        dir.path(),
        &["eval", "--N", "5", "--k", "3", "--x", "0", "--t", "0"],
    ));
    assert_eq!(doc["schema"], "weyl/1");
    assert_eq!(doc["command"], "eval");
    assert_eq!(doc["outputs"]["re"].as_f64().unwrap(), 5.0);
    assert!(doc["outputs"]["im"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn gauss_vanishing_sum() {
    let dir = TempDir::new().unwrap();
    let doc = json_of(&weyl(
        dir.path(),
        &["gauss", "--k", "2", "--a", "1", "--b", "1", "--q", "4"],
    ));
    assert!(doc["outputs"]["magnitude"].as_f64().unwrap() < 1e-12);
}

#[test]
fn exponent_fit_reports_prediction() {
    let dir = TempDir::new().unwrap();
    let doc = json_of(&weyl(
        dir.path(),
        &["exponent-fit", "--k", "3", "--p", "2", "--N", "8,12,16", "--no-farey"],
    ));
    assert!((doc["outputs"]["predicted_upper"].as_f64().unwrap() - 0.75).abs() < 1e-12);
    assert!(doc["outputs"]["fitted_slope"].as_f64().unwrap().is_finite());
}

#[test]
fn output_is_deterministic_and_replayed_from_cache() {
    let dir = TempDir::new().unwrap();
    let args = [
        "conjecture-scan",
        "--k",
        "3",
        "--N",
        "16",
        "--samples",
        "50",
        "--seed",
        "7",
    ];
    let first = weyl(dir.path(), &args);
    let doc = json_of(&first);
    let hash = doc["config_hash"].as_str().unwrap().to_string();
    assert!(dir.path().join(format!("{hash}.json")).exists());

    let replay = weyl(dir.path(), &args);
    assert_eq!(first.stdout, replay.stdout);
    assert!(String::from_utf8_lossy(&replay.stderr).contains("replaying"));

    let fresh = weyl(dir.path(), &[&args[..], &["--no-cache"]].concat());
    assert_eq!(first.stdout, fresh.stdout);

    let other = json_of(&weyl(
        dir.path(),
        &[
            "conjecture-scan",
            "--k",
            "3",
            "--N",
            "16",
            "--samples",
            "50",
            "--seed",
            "8",
        ],
    ));
    assert_ne!(other["config_hash"], doc["config_hash"]);
}

#[test]
fn sequential_and_parallel_agree() {
    let dir = TempDir::new().unwrap();
    let base = ["census", "--k", "3", "--q", "11", "--no-cache"];
    let seq = json_of(&weyl(dir.path(), &[&base[..], &["--threads", "1"]].concat()));
    let par = json_of(&weyl(dir.path(), &[&base[..], &["--threads", "2"]].concat()));
    assert_eq!(seq["outputs"], par["outputs"]);
    assert_eq!(seq["config_hash"], par["config_hash"]);
}

#[test]
fn usage_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let out = weyl(dir.path(), &["eval", "--N", "5", "--k", "3", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let out = weyl(dir.path(), &["eval", "--N", "0", "--k", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = weyl(dir.path(), &["census", "--k", "3", "--q", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn budget_overrun_exits_3() {
    let dir = TempDir::new().unwrap();
    let out = weyl(
        dir.path(),
        &["sup", "--N", "1000", "--k", "3", "--x", "0.1", "--budget", "1000"],
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn io_failure_exits_4() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("missing").join("grid.csv");
    let out = weyl(
        dir.path(),
        &[
            "eval",
            "--N",
            "4",
            "--k",
            "2",
            "--grid",
            "x",
            "--m",
            "4",
            "--csv",
            bad.to_str().unwrap(),
        ],
    );
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn grid_csv_has_header_and_one_line_per_point() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("grid.csv");
    let doc = json_of(&weyl(
        dir.path(),
        &[
            "eval",
            "--N",
            "4",
            "--k",
            "2",
            "--t",
            "0.25",
            "--grid",
            "x",
            "--m",
            "4",
            "--csv",
            path.to_str().unwrap(),
        ],
    ));
    assert_eq!(doc["outputs"]["m"], 4);
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert_eq!(text.lines().next(), Some(HEADER));
    let rows = parse_csv(&text).unwrap();
    assert_eq!(rows.len(), 4);
    // x = 0: Σ e(n²/4) over n = 1..4 is i + 1 + i + 1
    assert!((rows[0].value.re - 2.0).abs() < 1e-12 && (rows[0].value.im - 2.0).abs() < 1e-12);
}

#[test]
fn csv_round_trip_and_empty() {
    let mut buf = Vec::new();
    write_csv(&[], &mut buf).unwrap();
    assert_eq!(String::from_utf8(buf.clone()).unwrap(), format!("{HEADER}\n"));
    assert!(parse_csv(&String::from_utf8(buf).unwrap()).unwrap().is_empty());

    let rows: Vec<GridRow> = (0..7)
        .map(|i| GridRow {
            x: i as f64 / 7.0,
            t: 0.1 * i as f64,
            value: weyl_core::ComplexValue::new((i as f64).sin(), -1.0 / (i + 1) as f64),
        })
        .collect();
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf).unwrap();
    let back = parse_csv(&String::from_utf8(buf).unwrap()).unwrap();
    assert_eq!(back, rows);
}

#[test]
fn certificate_file_verifies() {
    let dir = TempDir::new().unwrap();
    let cert = dir.path().join("cert.json");
    let doc = json_of(&weyl(
        dir.path(),
        &["certificate", "--N", "100", "--out", cert.to_str().unwrap()],
    ));
    assert_eq!(doc["outputs"]["primes"], serde_json::json!([5, 7]));
    let v = json_of(&weyl(
        dir.path(),
        &["verify", "--cert", cert.to_str().unwrap(), "--points", "2"],
    ));
    let dev = v["outputs"]["max_center_deviation_over_q"].as_f64().unwrap();
    assert!(dev <= 2.0, "center deviation {dev}");
    assert!(v["outputs"]["relative_difference"].as_f64().unwrap() <= 1e-12);
}
