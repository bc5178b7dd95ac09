use std::path::Path;
use std::process::{Command, Output};

use zeroconv::classes::MembershipVerdict;
use zeroconv::domains::DomainVerdict;
use zeroconv::harness::TrialReport;
use zeroconv::herglotz::HerglotzApproximant;
use zeroconv::roots::RootSet;
use zeroconv::Polynomial;

fn zeroconv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zeroconv")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = zeroconv(args);
    assert!(
        out.status.success(),
        "{args:?} exited {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn poly(text: &str) -> Polynomial {
    serde_json::from_str(text).unwrap()
}

const A: &str = r#"{"n":3,"coeffs":[[1,0],[0.5,-0.25],[-2,1],[0.75,0]]}"#;
const B: &str = r#"{"n":3,"coeffs":[[0.3,0.1],[1,0],[0,2],[-1,0.5]]}"#;

#[test]
fn qcoef_is_the_binomial_at_zero() {
    assert_eq!(ok(&["qcoef", "5", "2", "0"]).trim(), "10");
}

#[test]
fn lambda_zero_is_grace_szego() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (write(dir.path(), "a.json", A), write(dir.path(), "b.json", B));
    let gs = poly(&ok(&["convolve", "--mode", "gs", &a, &b]));
    let lam = poly(&ok(&["convolve", "--mode", "lambda", "--lambda", "0", &a, &b]));
    assert!(gs.relative_distance(&lam) <= 1e-15, "{gs:?} vs {lam:?}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(zeroconv(&["qcoef", "5", "2", "0", "--bogus"]).status.code(), Some(2));
    assert_eq!(zeroconv(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(zeroconv(&[]).status.code(), Some(2));
    assert_eq!(zeroconv(&["qcoef", "5", "7", "0"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (write(dir.path(), "a.json", A), write(dir.path(), "b.json", B));
    assert_eq!(zeroconv(&["convolve", "--mode", "lambda", &a, &b]).status.code(), Some(2));
    let short = write(dir.path(), "s.json", r#"{"n":3,"coeffs":[[1,0]]}"#);
    assert_eq!(zeroconv(&["roots", &short]).status.code(), Some(2));
    assert_eq!(zeroconv(&["roots", "/nonexistent/p.json"]).status.code(), Some(2));
}

#[test]
fn emitted_json_reads_back() {
    let dir = tempfile::tempdir().unwrap();
    let q = ok(&["qpoly", "4", "1.2"]);
    let qf = write(dir.path(), "q.json", &q);
    let q = poly(&q);
    let inv = poly(&ok(&["inverse", &qf]));
    assert!(inv.relative_distance(&q) <= 1e-15);
    let d = poly(&ok(&["delta", &qf, "--lambda", "1.2"]));
    assert_eq!(d.nominal_degree(), 3);
    let rs: RootSet = serde_json::from_str(&ok(&["roots", &qf])).unwrap();
    assert_eq!(rs.degree(), 4);
    let v: MembershipVerdict = serde_json::from_str(&ok(&["classify", &qf, "--class", "Tbar", "--lambda", "1.2"])).unwrap();
    assert!(v.member);
    let dv: DomainVerdict = serde_json::from_str(&ok(&["domain", "roots-in", "--spec", "circle", &qf])).unwrap();
    assert!(dv.inside);
    let c = write(dir.path(), "c.json", r#"{"n":4,"coeffs":[[1,0],[1,0],[1,0],[1,0],[1,0]]}"#);
    let h: HerglotzApproximant = serde_json::from_str(&ok(&["herglotz", "--coeffs", &c, "--k", "4", "--r", "0.4"])).unwrap();
    h.validate().unwrap();
    let r: TrialReport =
        serde_json::from_str(&ok(&["verify", "--theorem", "suffridge", "--trials", "3", "--n", "3"])).unwrap();
    assert_eq!(r.failures, 0);
    assert_eq!(r.trials, 3 * 8);
}

#[test]
fn roots_csv_lines() {
    let dir = tempfile::tempdir().unwrap();
    // (z - 2)^2 (z - 0.5)
    let p = write(dir.path(), "p.json", r#"{"n":3,"coeffs":[[-2,0],[6,0],[-4.5,0],[1,0]]}"#);
    let csv = ok(&["roots", &p, "--format", "csv"]);
    let mut rows: Vec<Vec<String>> = csv.lines().map(|l| l.split(',').map(String::from).collect()).collect();
    rows.sort_by(|a, b| a[0].parse::<f64>().unwrap().total_cmp(&b[0].parse::<f64>().unwrap()));
    assert_eq!(rows.len(), 2);
    assert_eq!((rows[0][2].as_str(), rows[0][3].as_str()), ("1", "INSIDE"));
    assert_eq!((rows[1][2].as_str(), rows[1][3].as_str()), ("2", "OUTSIDE"));
    assert!((rows[1][0].parse::<f64>().unwrap() - 2.0).abs() < 1e-7);
}

#[test]
fn out_flag_writes_only_the_target() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", A);
    let target = dir.path().join("inv.json");
    let stdout = ok(&["inverse", &a, "--out", target.to_str().unwrap()]);
    assert!(stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&a).unwrap(), A);
    let inv = poly(&std::fs::read_to_string(&target).unwrap());
    assert!(inv.n_inverse().relative_distance(&poly(A)) <= 1e-15);
    let mut names: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names, ["a.json", "inv.json"]);
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "z.toml", "margin_tol = 0.001\nrng_seed = 7\n");
    let shown = ok(&["--show-config", "--config", &cfg, "--seed", "9"]);
    let parsed: toml::Table = toml::from_str(&shown).unwrap();
    assert_eq!(parsed["margin_tol"].as_float(), Some(0.001));
    assert_eq!(parsed["rng_seed"].as_integer(), Some(9));
    assert_eq!(parsed["output_format"].as_str(), Some("json"));
    let bad = write(dir.path(), "bad.toml", "x_grid = 3\n");
    assert_eq!(zeroconv(&["--show-config", "--config", &bad]).status.code(), Some(2));
    let unknown = write(dir.path(), "u.toml", "grid = 3\n");
    assert_eq!(zeroconv(&["--show-config", "--config", &unknown]).status.code(), Some(2));
}

#[test]
fn verdict_expectations_set_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let q = write(dir.path(), "q.json", &ok(&["qpoly", "3", "1"]));
    assert!(zeroconv(&["classify", &q, "--class", "Tbar", "--lambda", "1", "--expect", "member"]).status.success());
    assert_eq!(
        zeroconv(&["classify", &q, "--class", "T", "--lambda", "1", "--expect", "member"]).status.code(),
        Some(1)
    );
    // (1 - z/alpha)^2 with alpha = 2 has its zero outside the disk
    let p = write(dir.path(), "p.json", r#"{"n":2,"coeffs":[[1,0],[-1,0],[0.25,0]]}"#);
    assert_eq!(
        zeroconv(&["domain", "roots-in", "--spec", "disk", &p, "--expect", "member"]).status.code(),
        Some(1)
    );
}

#[test]
fn all_methods_report_individually() {
    let dir = tempfile::tempdir().unwrap();
    let q = write(dir.path(), "q.json", &ok(&["qpoly", "3", "1"]));
    let out: serde_json::Value =
        serde_json::from_str(&ok(&["classify", &q, "--class", "Dbar", "--lambda", "1", "--method", "all"])).unwrap();
    let entries = out.as_array().unwrap();
    assert_eq!(entries.len(), 4);
    for e in entries {
        if let Some(v) = e.get("verdict") {
            let v: MembershipVerdict = serde_json::from_value(v.clone()).unwrap();
            assert!(v.member, "{e}");
        } else {
            assert!(e.get("error").is_some());
        }
    }
    assert_eq!(
        zeroconv(&["classify", &q, "--class", "T", "--lambda", "1", "--method", "third"]).status.code(),
        Some(2)
    );
}

#[test]
fn domain_boundary_and_points() {
    let csv = ok(&["domain", "boundary", "--spec", "limacon-i:0.5", "--samples", "16", "--format", "csv"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "re,im");
    assert_eq!(lines.len(), 17);
    for l in &lines[1..] {
        let (x, y) = l.split_once(',').unwrap();
        let z = num_complex::Complex64::new(x.parse().unwrap(), y.parse().unwrap());
        assert!((z.norm() + 0.5 * (1.0 + z).norm() - 1.0).abs() < 1e-12, "{l}");
    }
    let pts: serde_json::Value = serde_json::from_str(&ok(&["domain", "contains", "--spec", "disk", "0.5,0", "-2,0"])).unwrap();
    assert_eq!(pts[0]["location"], "IN");
    assert_eq!(pts[1]["location"], "OUT");
}

#[test]
fn herglotz_error_table() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "c.json", r#"{"n":8,"coeffs":[[1,0],[2,0],[2,0],[2,0],[2,0],[2,0],[2,0],[2,0],[2,0]]}"#);
    let csv = ok(&["herglotz", "--coeffs", &c, "--k", "8", "--r", "0.5", "--format", "csv"]);
    let rows: Vec<(f64, f64)> = csv
        .lines()
        .skip(1)
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 19);
    // coefficients up to degree k match, so the error grows like rho^(k+1)
    assert!(rows[0].1 < 1e-12);
    assert!(rows.windows(2).all(|w| w[0].1 <= w[1].1 + 1e-15));
    let short = write(dir.path(), "s.json", r#"{"n":1,"coeffs":[[1,0],[1,0]]}"#);
    assert_eq!(zeroconv(&["herglotz", "--coeffs", &short, "--k", "4", "--r", "0.5"]).status.code(), Some(2));
}
