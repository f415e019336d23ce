use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use asymshrink::sim::{dj_test_function, mse};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_asymshrink"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read_column(path: &Path) -> Vec<f64> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter_map(|l| l.trim().parse().ok())
        .collect()
}

/// Doppler scaled to sd 7 plus Gaussian noise of sd 7.
fn noisy_doppler(dir: &Path) -> (Vec<f64>, Vec<f64>, std::path::PathBuf) {
    let raw = dj_test_function("doppler", 512).unwrap();
    let v = raw.as_slice();
    let mean = v.iter().sum::<f64>() / 512.0;
    let sd = (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 511.0).sqrt();
    let f: Vec<f64> = v.iter().map(|x| 7.0 * x / sd).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(512);
    let y: Vec<f64> = f
        .iter()
        .map(|x| x + 7.0 * rng.sample::<f64, _>(StandardNormal))
        .collect();
    let path = dir.join("doppler.csv");
    let body: String = std::iter::once("value".to_string())
        .chain(y.iter().map(f64::to_string))
        .collect::<Vec<_>>()
        .join("\n");
    fs::write(&path, body).unwrap();
    (f, y, path)
}

#[test]
fn denoise_reduces_error_on_noisy_doppler() {
    let dir = tempfile::tempdir().unwrap();
    let (f, y, input) = noisy_doppler(dir.path());
    let output = dir.path().join("out.csv");
    let out = run(&[
        "denoise",
        "-i",
        input.to_str().unwrap(),
        "-o",
        output.to_str().unwrap(),
        "--prior",
        "beta",
        "--a",
        "5",
        "--b",
        "1",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(
        stdout.contains("sigma_hat = ") && stdout.contains("estimated SNR = "),
        "{stdout}"
    );
    assert!(fs::read_to_string(&output).unwrap().starts_with("value\n"));
    let fhat = read_column(&output);
    assert_eq!(fhat.len(), 512);
    let before = mse(&y, &f).unwrap();
    let after = mse(&fhat, &f).unwrap();
    assert!(after * 4.0 <= before, "input {before}, output {after}");
}

#[test]
fn denoise_is_bytewise_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (_, _, input) = noisy_doppler(dir.path());
    let outputs: Vec<Vec<u8>> = (0..2)
        .map(|k| {
            let path = dir.path().join(format!("out{k}.csv"));
            let out = run(&["denoise", "-i", input.to_str().unwrap(), "-o", path.to_str().unwrap()]);
            assert!(out.status.success());
            fs::read(path).unwrap()
        })
        .collect();
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn denoise_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let zeros = dir.path().join("zeros.csv");
    fs::write(&zeros, "0\n".repeat(512)).unwrap();
    let out = run(&["denoise", "-i", zeros.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "x\n1\n2\nthree\n").unwrap();
    let out = run(&["denoise", "-i", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("row 4"));

    let odd = dir.path().join("odd.csv");
    fs::write(
        &odd,
        (0..300)
            .map(|i| format!("{}\n", (i as f64 * 0.1).sin()))
            .collect::<String>(),
    )
    .unwrap();
    assert_eq!(run(&["denoise", "-i", odd.to_str().unwrap()]).status.code(), Some(1));
    let out = run(&["denoise", "-i", odd.to_str().unwrap(), "--pad", "--j0", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 300);
}

#[test]
fn simulate_reports_every_method() {
    let out = run(&[
        "simulate",
        "--scenario",
        "study1-weak",
        "--n",
        "512",
        "--snr",
        "3",
        "--replications",
        "50",
        "--seed",
        "7",
        "--format",
        "json",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = report["methods"].as_array().unwrap();
    assert_eq!(rows.len(), 7);
    for row in rows {
        for key in ["id", "amse", "amse_sd", "amae", "amae_sd"] {
            assert!(!row[key].is_null(), "{key}");
        }
    }
    assert_eq!(report["seed"], 7);
    assert_eq!(report["replications"], 50);
}

#[test]
fn simulate_bumps_triangular() {
    // reference value 0.4282, with a 25% band at R = 50
    let out = run(&[
        "simulate",
        "--function",
        "bumps",
        "--n",
        "512",
        "--snr",
        "9",
        "--replications",
        "50",
        "--methods",
        "TRI",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let amse = report["methods"][0]["amse"].as_f64().unwrap();
    let band = 0.25 * 0.4282;
    println!("TRI AMSE on Bumps, SNR 9, R = 50: {amse:.4}");
    assert!(
        (amse - 0.4282).abs() <= band,
        "TRI AMSE {amse:.4} outside 0.4282 +- {band:.4}"
    );
}

#[test]
fn simulate_usage_errors_exit_two() {
    assert_eq!(run(&["simulate", "--function", "wiggles"]).status.code(), Some(2));
    let out = run(&["simulate", "--scenario", "study1-weak", "--methods", "LPM"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("BETAASYM"));
    assert_eq!(run(&["simulate"]).status.code(), Some(2));
}

fn riskgrid_rows(args: &[&str]) -> Vec<Vec<f64>> {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta,delta,squared_bias,variance,risk"));
    lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn riskgrid_bias_at_minus_two() {
    let rows = riskgrid_rows(&[
        "riskgrid",
        "--prior",
        "beta",
        "--a",
        "7",
        "--b",
        "1",
        "--m",
        "3",
        "--alpha",
        "0.9",
        "--sigma",
        "1",
        "--theta-min",
        "-6",
        "--theta-max",
        "6",
        "--points",
        "121",
    ]);
    assert_eq!(rows.len(), 121);
    let row = rows.iter().find(|r| (r[0] + 2.0).abs() < 1e-9).unwrap();
    assert!((row[2] - 4.0071).abs() < 0.01, "{}", row[2]);
    for r in &rows {
        assert!((r[4] - r[2] - r[3]).abs() < 1e-8);
    }
}

#[test]
fn riskgrid_skew_normal_delta_at_ten() {
    let rows = riskgrid_rows(&[
        "riskgrid",
        "--prior",
        "skew-normal",
        "--tau",
        "8",
        "--gamma",
        "8",
        "--theta-min",
        "10",
        "--theta-max",
        "10",
        "--points",
        "1",
    ]);
    assert_eq!(rows.len(), 1);
    assert!((rows[0][1] - 9.8462).abs() < 0.001, "{}", rows[0][1]);
}

#[test]
fn riskgrid_single_point_and_flag_checks() {
    let rows = riskgrid_rows(&["riskgrid", "--theta-min", "0", "--theta-max", "0", "--points", "1"]);
    assert_eq!(rows.len(), 1);
    assert!(rows[0].iter().all(|v| v.is_finite()));
    assert_eq!(
        run(&["riskgrid", "--prior", "beta", "--tau", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["riskgrid", "--points", "0"]).status.code(), Some(2));
    assert_eq!(run(&["riskgrid", "--alpha", "1.5"]).status.code(), Some(2));
}
