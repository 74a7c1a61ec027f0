use std::fs;

use kuramoto_duo::{eval_h, output::read_curves, CouplingParams};
use kuramoto_duo_cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<String> = std::iter::once("kuramoto-duo")
        .chain(args.iter().copied())
        .map(String::from)
        .collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn solve_region_ten() {
    let (code, out, err) = call(&[
        "solve", "--K1", "4", "--K2", "5.5", "--L1", "-1", "--L2", "-2", "--psi", "0",
    ]);
    assert_eq!(code, 0, "{err}");
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "K1,K2,L1,L2,psi,r1,r2,tangent_flag");
    assert_eq!(lines.len() - 1, 4);
    assert!(err.contains("region R10"));
}

#[test]
fn classify_prints_region_and_cap() {
    let (code, out, _) = call(&[
        "classify", "--K1", "1", "--K2", "2", "--L1", "3", "--L2", "1",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "R2, max 2");
}

#[test]
fn vfun_derivative_at_zero() {
    let (code, out, _) = call(&["vfun", "--x", "0", "--which", "Vp"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim().parse::<f64>().unwrap(), 0.5);
    let (_, out, _) = call(&["vfun", "--x", "-2"]);
    assert_eq!(out.trim(), "-0.697774657964");
}

#[test]
fn curves_round_trip_within_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curves.csv");
    let (code, _, err) = call(&[
        "curves",
        "--K1",
        "4",
        "--K2",
        "5.5",
        "--L1",
        "-1",
        "--L2",
        "-2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let rows = read_curves(fs::read_to_string(&path).unwrap().as_bytes()).unwrap();
    assert!(rows.len() > 1000);
    let q = CouplingParams::new(4.0, 5.5, -1.0, -2.0).unwrap();
    for (curve, s) in rows {
        let h = eval_h(curve, &q, s.r1.clamp(0.0, 1.0), s.r2.clamp(0.0, 1.0)).unwrap();
        assert!(h.abs() <= 1e-8, "{curve:?} {s:?} {h:e}");
    }
}

#[test]
fn usage_and_domain_errors() {
    assert_eq!(call(&["classify", "--K1", "1", "--bogus", "2"]).0, 2);
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(call(&["vfun", "--x", "abc"]).0, 2);
    let (code, _, err) = call(&[
        "classify", "--K1", "1", "--K2", "1", "--L1", "0", "--L2", "1",
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("nonzero"));
    assert_eq!(
        call(&["density", "--K1", "3", "--K2", "4", "--L1", "2", "--L2", "1", "--ntheta", "100"]).0,
        1
    );
    assert_eq!(call(&["--help"]).0, 0);
}

#[test]
fn symmetric_reports_level_set() {
    let (code, out, _) = call(&[
        "symmetric",
        "--K1",
        "1",
        "--K2",
        "2",
        "--L1",
        "3",
        "--L2",
        "2",
    ]);
    assert_eq!(code, 0);
    let row: Vec<f64> = out
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect();
    assert_eq!(row[0], 4.0);
    assert!((row[1] - 0.831462024754).abs() < 1e-12);
    let (_, out, _) = call(&[
        "symmetric",
        "--K1",
        "1",
        "--K2",
        "2",
        "--L1",
        "3",
        "--L2",
        "1",
    ]);
    assert!(out.starts_with("no symmetry class"));
}

#[test]
fn density_is_normalized() {
    let (code, out, _) = call(&[
        "density", "--K1", "3", "--K2", "4", "--L1", "2", "--L2", "1", "--omega", "0.5",
        "--ntheta", "128",
    ]);
    assert_eq!(code, 0);
    let vals: Vec<f64> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(vals.len(), 128);
    let mass: f64 = vals.iter().sum::<f64>() * std::f64::consts::TAU / 128.0;
    assert!((mass - 1.0).abs() < 1e-9);
}

#[test]
fn simulate_writes_outputs_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sim.json");
    fs::write(
        &cfg,
        r#"{"K1": 3, "K2": 4, "L1": 2, "L2": 1, "N1": 100, "N2": 100, "t_total": 2.0, "burn_in": 1.0,
            "init": "point_mass", "theta1": 0.0, "theta2": 0.0}"#,
    )
    .unwrap();
    let out_dir = dir.path().join("run");
    let args = [
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "4",
        "--out",
        out_dir.to_str().unwrap(),
    ];
    let (code, first, err) = call(&args);
    assert_eq!(code, 0, "{err}");
    let series = fs::read_to_string(out_dir.join("series.csv")).unwrap();
    assert!(series.starts_with("t,r1,psi1,r2,psi2\n"));
    assert_eq!(series.lines().count(), 22);
    let est: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("estimate.json")).unwrap()).unwrap();
    assert!(est["r1_mean"].as_f64().unwrap() > 0.5);
    let (_, second, _) = call(&args);
    assert_eq!(first, second);
}

#[test]
fn malformed_configs_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(
        &cfg,
        r#"{"K1": 3, "K2": 4, "L1": 2, "L2": 1, "colour": "red"}"#,
    )
    .unwrap();
    assert_eq!(call(&["simulate", "--config", cfg.to_str().unwrap()]).0, 2);
    fs::write(&cfg, "not json").unwrap();
    assert_eq!(
        call(&[
            "sweep",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            "unused"
        ])
        .0,
        2
    );
    assert_eq!(
        call(&["simulate", "--config", "/nonexistent/file.json"]).0,
        2
    );
    fs::write(&cfg, r#"{"K1": 3, "K2": 4, "L1": 2, "L2": 1, "dt": 0.5}"#).unwrap();
    assert_eq!(call(&["simulate", "--config", cfg.to_str().unwrap()]).0, 1);
}

#[test]
fn sweep_writes_region_raster() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.json");
    fs::write(
        &cfg,
        r#"{"K2": 5.5, "L2": -2, "x_axis": "K1", "x_min": 1, "x_max": 5, "x_n": 5,
            "y_axis": "L1", "y_min": -2, "y_max": 2, "y_n": 4, "psi": "both"}"#,
    )
    .unwrap();
    let out = dir.path().join("raster");
    let (code, _, err) = call(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let zero = fs::read_to_string(out.join("regions_psi0.csv")).unwrap();
    let lines: Vec<&str> = zero.lines().collect();
    assert_eq!(lines[0], "K1,K2,L1,L2,region,n_solutions");
    assert_eq!(lines.len(), 1 + 20);
    assert!(lines.contains(&"1,5.5,-2,-2,R1,1"));
    assert!(lines.iter().any(|l| l.starts_with("4,5.5,-2,-2,R10,")));
    assert!(out.join("regions_pi.csv").exists());
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_kuramoto-duo");
    let ok = std::process::Command::new(bin)
        .args(["vfun", "--x", "1"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let usage = std::process::Command::new(bin)
        .args(["vfun"])
        .output()
        .unwrap();
    assert_eq!(usage.status.code(), Some(2));
    let domain = std::process::Command::new(bin)
        .args(["vfun", "--x", "inf"])
        .output()
        .unwrap();
    assert_eq!(domain.status.code(), Some(1));
}
