//! End-to-end runs of the `ahg` binary.

use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use ahg_core::wigner::wvd_pair;
use ahg_core::{AnisotropyMatrix, CMat, Complex64, MultiIndex, PhasePoint};
use serde_json::Value;

const IDENTITY2: &str = r#"{"n":2,"re":[[1,0],[0,1]]}"#;
const IDENTITY1: &str = r#"{"n":1,"re":[[1]]}"#;
const REFERENCE2: &str = r#"{"n":2,"re":[[1.0,0.3],[0.3,0.8]]}"#;

fn ahg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ahg")).args(args).output().expect("run ahg")
}

fn ahg_ok(args: &[&str]) -> String {
    let out = ahg(args);
    assert!(out.status.success(), "ahg {args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn exit_code(args: &[&str]) -> (i32, String) {
    let out = ahg(args);
    (out.status.code().expect("exit code"), String::from_utf8_lossy(&out.stderr).into_owned())
}

/// Header and numeric rows of a CSV document.
fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().expect("header").split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(|t| t.parse().expect("number")).collect()).collect();
    (header, rows)
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

fn complex(v: &Value) -> Complex64 {
    Complex64::new(v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn eval_grid_ground_state() {
    let (header, rows) = parse_csv(&ahg_ok(&["eval-grid", "--theta", IDENTITY1, "--degree", "0", "--grid", "-3:3:7"]));
    assert_eq!(header, ["r1", "re", "im"]);
    assert_eq!(rows.len(), 7);
    let centre = &rows[3];
    assert_eq!(centre[0], 0.0);
    assert!((centre[1] - PI.powf(-0.25)).abs() < 1e-15);
    assert_eq!(centre[2], 0.0);
    for r in &rows {
        assert!((r[1] - PI.powf(-0.25) * (-0.5 * r[0] * r[0]).exp()).abs() < 1e-15);
    }
}

#[test]
fn eval_grid_odd_mode_vanishes_at_origin() {
    let (_, rows) = parse_csv(&ahg_ok(&["eval-grid", "--theta", IDENTITY1, "--degree", "1", "--grid", "-3:3:7"]));
    assert_eq!(rows[3][1], 0.0);
    assert!(rows[4][1] > 0.0);
}

#[test]
fn eval_grid_is_reproducible_and_thread_count_independent() {
    let args = ["eval-grid", "--theta", REFERENCE2, "--degree", "2,1", "--grid", "-2:2:31", "--grid", "-1.5:1.5:29"];
    let a = ahg_ok(&args);
    assert_eq!(a, ahg_ok(&args));
    let threaded = |k: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_ahg")).env("AHG_THREADS", k).args(args).output().unwrap();
        assert!(out.status.success());
        String::from_utf8(out.stdout).unwrap()
    };
    assert_eq!(threaded("1"), a);
    assert_eq!(threaded("4"), a);
    assert_eq!(parse_csv(&a).1.len(), 31 * 29);
}

#[test]
fn eval_grid_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    let stdout = ahg_ok(&["eval-grid", "--theta", IDENTITY2, "--degree", "1,0", "--grid", "-1:1:3", "--grid", "0:1:2", "-o", path.to_str().unwrap()]);
    assert!(stdout.is_empty());
    let (header, rows) = parse_csv(&read(&path));
    assert_eq!(header, ["r1", "r2", "re", "im"]);
    assert_eq!(rows.len(), 6);
    // first axis slowest
    assert_eq!((rows[1][0], rows[1][1]), (-1.0, 1.0));
}

#[test]
fn fourier_of_second_mode_flips_sign() {
    // Θ = I is a Fourier eigenbasis with eigenvalue (−i)² = −1 at degree 2
    let grid = ["--grid", "-2:2:9"];
    let (_, direct) = parse_csv(&ahg_ok(&[&["eval-grid", "--theta", IDENTITY1, "--degree", "2"][..], &grid].concat()));
    let (header, ft) = parse_csv(&ahg_ok(&[&["transform", "--theta", IDENTITY1, "--degree", "2", "--kind", "ft"][..], &grid].concat()));
    assert_eq!(header, ["z1", "re", "im"]);
    for (d, f) in direct.iter().zip(&ft) {
        assert_eq!(d[0], f[0]);
        assert!((f[1] + d[1]).abs() < 1e-13 && f[2].abs() < 1e-13, "{d:?} {f:?}");
    }
}

#[test]
fn quarter_turn_frft_is_the_fourier_transform() {
    let common = ["--theta", REFERENCE2, "--degree", "1,2", "--grid", "-1:1:5", "--grid", "-1:1:5"];
    let (_, ft) = parse_csv(&ahg_ok(&[&["transform", "--kind", "ft"][..], &common].concat()));
    let (_, fr) = parse_csv(&ahg_ok(&[&["transform", "--kind", "frft:1.5707963"][..], &common].concat()));
    for (a, b) in ft.iter().zip(&fr) {
        assert!((a[2] - b[2]).abs() < 1e-6 && (a[3] - b[3]).abs() < 1e-6, "{a:?} {b:?}");
    }
}

#[test]
fn sidecar_reports_xi() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    ahg_ok(&["transform", "--theta", IDENTITY2, "--degree", "0,0", "--kind", "frft:1.0", "--grid", "0:1:2", "--grid", "0:1:2", "-o", out.to_str().unwrap()]);
    let meta: Value = serde_json::from_str(&read(&dir.path().join("t.csv.json"))).unwrap();
    assert_eq!(meta["kind"], "frft:1.0");
    assert_eq!(meta["degree"], "0,0");
    // for Θ = I the FrFT gives Ξ = −sin²γ e^{−2iγ} I
    let want = Complex64::from_polar(1.0, -2.0) * -(1f64.sin().powi(2));
    let xi = &meta["xi"];
    for i in 0..2 {
        for j in 0..2 {
            let z = Complex64::new(xi["re"][i][j].as_f64().unwrap(), xi["im"][i][j].as_f64().unwrap());
            let expect = if i == j { want } else { Complex64::new(0.0, 0.0) };
            assert!((z - expect).norm() < 1e-14, "Ξ[{i}][{j}] = {z}");
        }
    }
}

#[test]
fn explicit_sidecar_path_and_laplace() {
    let dir = tempfile::tempdir().unwrap();
    let side = dir.path().join("meta.json");
    let csv = ahg_ok(&["transform", "--theta", IDENTITY1, "--degree", "0", "--kind", "laplace", "--grid", "0:1:2", "--sidecar", side.to_str().unwrap()]);
    let (_, rows) = parse_csv(&csv);
    // L{π^{-1/4} e^{-x²/2}}(ζ) = √(2π) π^{-1/4} e^{ζ²/2}
    for r in &rows {
        let want = (2.0 * PI).sqrt() * PI.powf(-0.25) * (0.5 * r[0] * r[0]).exp();
        assert!((r[1] - want).abs() < 1e-12 * want && r[2].abs() < 1e-12, "{r:?}");
    }
    let meta: Value = serde_json::from_str(&read(&side)).unwrap();
    assert_eq!(meta["kind"], "laplace");
}

#[test]
fn strict_preconditions_fail_with_math_exit_code() {
    let (a, b) = (0.2f64.cos().to_string(), 0.2f64.sin().to_string());
    let abcd = format!("{a},{b},-{b},{a}");
    let args = ["transform", "--theta", IDENTITY1, "--degree", "0", "--abcd", &abcd, "--grid", "0:1:3"];
    let (code, err) = exit_code(&args);
    assert_eq!(code, 3);
    assert!(err.contains('Ξ'), "{err}");
    let relaxed = [&args[..], &["--relaxed", "--calibrate", "off"]].concat();
    assert_eq!(parse_csv(&ahg_ok(&relaxed)).1.len(), 3);
}

#[test]
fn general_lct_with_calibration() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lct.csv");
    let theta = r#"{"n":1,"re":[[0.35]]}"#;
    ahg_ok(&["transform", "--theta", theta, "--degree", "2", "--abcd", "1,1,0,1", "--calibrate", "on", "--grid", "-1:1:3", "-o", out.to_str().unwrap()]);
    let meta: Value = serde_json::from_str(&read(&dir.path().join("lct.csv.json"))).unwrap();
    assert_eq!(meta["calibration"]["status"], "applied");
    let ratio = complex(&meta["calibration"]["ratio"]);
    assert!((ratio.norm() - 1.0).abs() < 1e-6, "ratio {ratio}");
}

#[test]
fn wvd_of_ground_state_is_real_and_even() {
    let (header, rows) =
        parse_csv(&ahg_ok(&["wvd", "--theta", REFERENCE2, "--degree", "0,0", "--grid", "-1:1:3", "--grid", "-1:1:3", "--zeta-grid", "-1:1:3", "--zeta-grid", "-1:1:3"]));
    assert_eq!(header, ["r1", "r2", "zeta1", "zeta2", "w_re", "w_im"]);
    assert_eq!(rows.len(), 81);
    for r in &rows {
        assert!(r[5].abs() < 1e-10);
        assert!(r[4] > 0.0);
        // the grids are symmetric, so the mirrored row is row 80 − k
        let k = rows.iter().position(|s| s == r).unwrap();
        let m = &rows[80 - k];
        assert_eq!(&m[..4], &[-r[0], -r[1], -r[2], -r[3]]);
        assert!((m[4] - r[4]).abs() < 1e-13 * r[4].abs().max(1.0));
    }
}

#[test]
fn wvd_matches_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let coeffs = dir.path().join("c.json");
    std::fs::write(&coeffs, r#"{"1,0": [1, 0], "0,2": [0, 0.5]}"#).unwrap();
    let (_, rows) = parse_csv(&ahg_ok(&[
        "wvd", "--theta", REFERENCE2, "--coeffs", coeffs.to_str().unwrap(),
        "--grid", "-0.5:0.5:2", "--grid", "0:0.4:2", "--zeta-grid", "-0.3:0.9:2", "--zeta-grid", "0.1:0.2:2",
    ]));
    let th = AnisotropyMatrix::new(CMat::from_real_rows(&[&[1.0, 0.3], &[0.3, 0.8]]).unwrap()).unwrap();
    let terms = [(MultiIndex::new(vec![1, 0]), Complex64::new(1.0, 0.0)), (MultiIndex::new(vec![0, 2]), Complex64::new(0.0, 0.5))];
    for r in &rows {
        let p = PhasePoint::new(r[..2].to_vec(), r[2..4].to_vec()).unwrap();
        let mut w = Complex64::new(0.0, 0.0);
        for (nu, a) in &terms {
            for (mu, b) in &terms {
                w += a * b.conj() * wvd_pair(&th, nu, mu, &p).unwrap();
            }
        }
        assert!((w - Complex64::new(r[4], r[5])).norm() < 1e-12, "{r:?} vs {w}");
    }
}

#[test]
fn wvd_rejects_complex_theta() {
    let theta = r#"{"n":1,"re":[[1]],"im":[[0.2]]}"#;
    let (code, _) = exit_code(&["wvd", "--theta", theta, "--degree", "0", "--grid", "0:1:2", "--zeta-grid", "0:1:2"]);
    assert_eq!(code, 3);
}

fn expand(args: &[&str]) -> Value {
    serde_json::from_str(&ahg_ok(&[&["expand"][..], args].concat())).unwrap()
}

#[test]
fn expand_recovers_a_mode() {
    let v = expand(&["--theta", REFERENCE2, "--builtin", "mode:2,1", "--max-order", "4"]);
    let coeffs = v["coefficients"].as_object().unwrap();
    assert_eq!(coeffs.len(), 15);
    for (k, a) in coeffs {
        let a = complex(a);
        let want = if k == "2,1" { 1.0 } else { 0.0 };
        assert!((a - Complex64::new(want, 0.0)).norm() < 1e-8, "{k}: {a}");
    }
}

#[test]
fn expand_gaussian_on_identity() {
    let v = expand(&["--theta", IDENTITY2, "--builtin", "gaussian", "--max-order", "3"]);
    for (k, a) in v["coefficients"].as_object().unwrap() {
        let want = if k == "0,0" { 1.0 } else { 0.0 };
        assert!((complex(a) - Complex64::new(want, 0.0)).norm() < 1e-8, "{k}");
    }
    assert!(v["residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn expand_residual_decreases_with_order() {
    let residual = |k: &str| {
        expand(&["--theta", IDENTITY2, "--builtin", "shifted-gaussian:0.8,-0.4", "--max-order", k])["residual"].as_f64().unwrap()
    };
    let (r2, r5, r9) = (residual("2"), residual("5"), residual("9"));
    assert!(r2 > r5 && r5 > r9, "{r2} {r5} {r9}");
}

#[test]
fn expand_from_samples() {
    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("s.csv");
    ahg_ok(&["eval-grid", "--theta", IDENTITY1, "--degree", "1", "--grid", "-7:7:1401", "-o", samples.to_str().unwrap()]);
    let v = expand(&["--theta", IDENTITY1, "--samples", samples.to_str().unwrap(), "--max-order", "3"]);
    let c = v["coefficients"].as_object().unwrap();
    // linear interpolation on a 0.01 grid
    assert!((complex(&c["1"]) - Complex64::new(1.0, 0.0)).norm() < 1e-4);
    for k in ["0", "2", "3"] {
        assert!(complex(&c[k]).norm() < 1e-4, "{k}");
    }
}

#[test]
fn usage_errors_exit_2() {
    let cases: [&[&str]; 6] = [
        &["expand", "--theta", IDENTITY2, "--builtin", "sawtooth"],
        &["eval-grid", "--theta", "{not json", "--degree", "0", "--grid", "0:1:2"],
        &["eval-grid", "--theta", IDENTITY2, "--degree", "0", "--grid", "0:1:2"],
        &["eval-grid", "--theta", IDENTITY1, "--degree", "0,1", "--grid", "0:1:2"],
        &["eval-grid", "--theta", IDENTITY1, "--degree", "0", "--grid", "0:1"],
        &["verify", "--suite", "nonsense"],
    ];
    for args in cases {
        let (code, err) = exit_code(args);
        assert_eq!(code, 2, "{args:?}: {err}");
        assert!(!err.is_empty());
    }
    let out = Command::new(env!("CARGO_BIN_EXE_ahg"))
        .env("AHG_THREADS", "zero")
        .args(["eval-grid", "--theta", IDENTITY1, "--degree", "0", "--grid", "0:1:2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn indefinite_theta_is_rejected_as_input() {
    let theta = r#"{"n":1,"re":[[-1]]}"#;
    let (code, _) = exit_code(&["eval-grid", "--theta", theta, "--degree", "0", "--grid", "0:1:2"]);
    assert_eq!(code, 2, "theta loading is input validation");
}

#[test]
fn verify_exit_codes() {
    let out = ahg_ok(&["verify", "--suite", "zero", "--n", "1"]);
    assert!(out.lines().all(|l| l.starts_with("PASS") || l.contains("0 failed")), "{out}");
    let (code, _) = exit_code(&["verify", "--suite", "zero", "--n", "1", "--tol", "0"]);
    assert_eq!(code, 1);
    let (code, _) = exit_code(&["verify", "--n", "9"]);
    assert_eq!(code, 2);
}
