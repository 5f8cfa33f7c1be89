use std::path::Path;
use std::process::{Command, Output};

use elastica_core::output::{Format, Table};

fn elastica(args: &[&str], out_env: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_elastica"));
    cmd.args(args).env_remove("ELASTICA_OUT_DIR");
    if let Some(dir) = out_env {
        cmd.env("ELASTICA_OUT_DIR", dir);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn circle_with_both_solvers_agrees() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("circle");
    let o = elastica(
        &["run", "--scenario", "circle", "--solver", "both", "--T", "0.01", "--N", "32", "--out", out.to_str().unwrap()],
        None,
    );
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    let gap = Table::read(&out.join("discrepancy.csv"), Format::Csv).unwrap();
    let worst = gap.column("sup_u_gap").unwrap().into_iter().fold(0.0, f64::max);
    assert!(worst <= 1e-8, "{worst:e}");
    for f in ["trajectory_hasimoto.csv", "trajectory_direct.csv", "diagnostics_direct.csv", "report.json"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let traj = Table::read(&out.join("trajectory_direct.csv"), Format::Csv).unwrap();
    assert!(traj.column("lambda").unwrap().iter().all(|l| (l + 1.0).abs() < 1e-8));
}

#[test]
fn latitude_beta_is_consistent_and_json_output_works() {
    let dir = tempfile::tempdir().unwrap();
    let o = elastica(
        &["run", "--scenario", "latitude", "--psi", "1.0471975512", "--solver", "hasimoto", "--T", "0.1", "--format", "json"],
        Some(dir.path()),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let diag = Table::read(&dir.path().join("diagnostics_hasimoto.json"), Format::Json).unwrap();
    let beta = diag.column("beta").unwrap();
    // at rest, B(Y) = 0 and β stays at cos ψ (mod 1)
    for b in &beta {
        let d = (b - 0.5f64).rem_euclid(1.0);
        assert!(d.min(1.0 - d) < 1e-6, "{b}");
    }
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["outcome"], "passed");
}

#[test]
fn moving_latitude_reports_linear_closure_growth() {
    let dir = tempfile::tempdir().unwrap();
    let o = elastica(
        &["run", "--scenario", "latitude", "--rate=-0.5773502691896258", "--T", "0.05", "--N", "32", "--out", dir.path().to_str().unwrap()],
        None,
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("closure growth vs linear"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "scenario = \"perturbed-3d\"\nN = 32\nT = 0.01\ndt = 0.002\nmode = 2\nsamples = 5\n").unwrap();
    let out = dir.path().join("o");
    let o = elastica(
        &["run", "--config", cfg.to_str().unwrap(), "--dt", "0.001", "--out", out.to_str().unwrap()],
        None,
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let diag = Table::read(&out.join("diagnostics_hasimoto.csv"), Format::Csv).unwrap();
    assert_eq!(diag.rows.len(), 6);
    let t = diag.column("t").unwrap();
    assert!((t[1] - 0.002).abs() < 1e-15, "10 steps of 1e-3 over 5 samples");
}

#[test]
fn malformed_config_exits_4_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "N = \"many\"\n").unwrap();
    let out = dir.path().join("never");
    let cases: Vec<Vec<&str>> = vec![
        vec!["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()],
        vec!["run", "--config", "/nonexistent/x.toml", "--out", out.to_str().unwrap()],
        vec!["run", "--dt", "0.003", "--out", out.to_str().unwrap()],
        vec!["run", "--N", "48", "--out", out.to_str().unwrap()],
        vec!["run", "--solver", "rk4", "--out", out.to_str().unwrap()],
        vec!["run", "--bogus", "--out", out.to_str().unwrap()],
        vec!["verify", "--N", "128"],
    ];
    for args in cases {
        let o = elastica(&args, Some(&out));
        assert_eq!(o.status.code(), Some(4), "{args:?}");
        assert!(!out.exists(), "{args:?} created output");
    }
}

#[test]
fn picard_failure_is_an_aborted_run() {
    let dir = tempfile::tempdir().unwrap();
    let o = elastica(
        &["run", "--scenario", "perturbed-3d", "--mode", "2", "--N", "32", "--T", "0.05", "--dt", "0.05", "--max-iter", "1", "--out", dir.path().to_str().unwrap()],
        None,
    );
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    assert!(dir.path().join("report.json").exists());
}

#[test]
fn help_exits_cleanly() {
    assert_eq!(elastica(&["--help"], None).status.code(), Some(0));
}

#[test]
fn verify_writes_a_machine_readable_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = elastica(&["verify", "--N", "32", "--out", dir.path().to_str().unwrap()], None);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("criterion")).count(), 11);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("verify.json")).unwrap()).unwrap();
    assert_eq!(report["checks"].as_array().unwrap().len(), 11);
}
