//! Executes a resolved configuration: evolve, write tables, check invariants.

use std::path::{Path, PathBuf};

use elastica_core::dynamics::{evolve_direct, evolve_hasimoto, DirectOptions, Diagnostics, EvolveOptions, HasimotoSample};
use elastica_core::geometry::{torsion, CurveState};
use elastica_core::output::{diagnostics_table, trajectory_table, Format, Table};
use elastica_core::scenario::Scenario;
use elastica_core::verify::{trajectory_measurements, Measurement};
use elastica_core::{vec3, ElasticaError};
use serde::Serialize;

use crate::config::{RunConfig, Solver};

/// Exit status of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Passed,
    Aborted,
    Violated,
}

impl Outcome {
    pub fn code(self) -> i32 {
        match self {
            Outcome::Passed => 0,
            Outcome::Aborted => 2,
            Outcome::Violated => 3,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PathReport {
    pub solver: &'static str,
    pub completed: bool,
    pub failure: Option<String>,
    pub samples: usize,
    pub checks: Vec<Measurement>,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub scenario: &'static str,
    pub outcome: Outcome,
    pub paths: Vec<PathReport>,
    /// Checks comparing the two paths (`both` only).
    pub comparison: Vec<Measurement>,
    pub files: Vec<PathBuf>,
}

struct PathResult {
    report: PathReport,
    times: Vec<f64>,
    curves: Vec<CurveState>,
    diagnostics: Vec<Diagnostics>,
}

type PathRunner = fn(&RunConfig, &CurveState) -> Result<PathResult, ElasticaError>;

fn mod1_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Checks shared by both paths, plus linear closure growth for open loops.
fn path_checks(initial: &CurveState, diags: &[Diagnostics]) -> Vec<Measurement> {
    let mean_v = initial.v.mean_vector();
    let closed = vec3::norm(mean_v) <= 1e-10;
    let mut out = trajectory_measurements(diags, closed);
    if !closed {
        let c0 = initial.u.mean_vector();
        let worst = diags
            .iter()
            .map(|d| {
                let want = vec3::axpy(d.t, mean_v, c0);
                vec3::norm(vec3::sub(d.closure, want)) / vec3::norm(want).max(1e-300)
            })
            .fold(0.0, f64::max);
        out.push(Measurement::at_most("closure growth vs linear", worst, 1e-4));
    }
    out
}

fn run_hasimoto(cfg: &RunConfig, initial: &CurveState) -> Result<PathResult, ElasticaError> {
    let h = HasimotoSample::from_curve(initial)?;
    let opts = EvolveOptions {
        step: cfg.step,
        sample_every: cfg.sample_every,
        ..EvolveOptions::default()
    };
    let tr = evolve_hasimoto(&h, cfg.t_final, cfg.dt, &opts)?;
    let mut curves = Vec::with_capacity(tr.states.len());
    let mut beta_gap: Option<f64> = None;
    for s in &tr.states {
        let c = s.curve()?;
        if let Ok((_, t)) = torsion(&c.u) {
            beta_gap = Some(beta_gap.unwrap_or(0.0).max(mod1_distance(s.state.beta, t.monodromy)));
        }
        curves.push(c);
    }
    let mut checks = path_checks(initial, &tr.diagnostics);
    if let Some(g) = beta_gap {
        checks.push(Measurement::at_most("beta vs mean torsion (mod 1)", g, 1e-5));
    }
    Ok(PathResult {
        report: PathReport {
            solver: "hasimoto",
            completed: tr.completed(),
            failure: tr.failure.as_ref().map(|e| e.to_string()),
            samples: tr.states.len(),
            checks,
        },
        times: tr.times,
        curves,
        diagnostics: tr.diagnostics,
    })
}

fn run_direct(cfg: &RunConfig, initial: &CurveState) -> Result<PathResult, ElasticaError> {
    let opts = DirectOptions {
        sample_every: cfg.direct_sample_every,
        ..DirectOptions::default()
    };
    let tr = evolve_direct(initial, cfg.t_final, cfg.direct_dt, &opts)?;
    let mut checks = path_checks(initial, &tr.diagnostics);
    let drift = tr.diagnostics.iter().map(|d| d.projection_drift).fold(0.0, f64::max);
    checks.push(Measurement::at_most("pre-projection constraint drift", drift, 1e-6));
    Ok(PathResult {
        report: PathReport {
            solver: "direct",
            completed: tr.completed(),
            failure: tr.failure.as_ref().map(|e| e.to_string()),
            samples: tr.states.len(),
            checks,
        },
        times: tr.times,
        curves: tr.states,
        diagnostics: tr.diagnostics,
    })
}

fn write_table(dir: &Path, stem: &str, table: &Table, format: Format, files: &mut Vec<PathBuf>) -> Result<(), String> {
    let path = dir.join(format!("{stem}.{}", format.extension()));
    table.write(&path, format).map_err(|e| e.to_string())?;
    files.push(path);
    Ok(())
}

/// Runs `cfg`, writing every artifact into `cfg.out`. I/O problems are errors;
/// numerical trouble is reported through the outcome.
pub fn run(cfg: &RunConfig) -> Result<RunReport, String> {
    let scenario = Scenario::build(cfg.scenario, cfg.grid).map_err(|e| e.to_string())?;
    let initial = &scenario.initial;
    let format: Format = cfg.format.into();
    std::fs::create_dir_all(&cfg.out).map_err(|e| format!("cannot create {}: {e}", cfg.out.display()))?;
    let mut files = Vec::new();
    let mut paths = Vec::new();
    let mut results = Vec::new();
    let mut aborted = false;

    let mut todo: Vec<(&'static str, PathRunner)> = Vec::new();
    if cfg.solver != Solver::Direct {
        todo.push(("hasimoto", run_hasimoto));
    }
    if cfg.solver != Solver::Hasimoto {
        todo.push(("direct", run_direct));
    }
    for (name, f) in todo {
        match f(cfg, initial) {
            Ok(r) => {
                let traj = trajectory_table(r.times.iter().cloned().zip(r.curves.iter())).map_err(|e| e.to_string())?;
                write_table(&cfg.out, &format!("trajectory_{name}"), &traj, format, &mut files)?;
                let diags = diagnostics_table(&r.diagnostics);
                write_table(&cfg.out, &format!("diagnostics_{name}"), &diags, format, &mut files)?;
                aborted |= !r.report.completed;
                results.push(r);
            }
            Err(e) => {
                aborted = true;
                paths.push(PathReport {
                    solver: name,
                    completed: false,
                    failure: Some(e.to_string()),
                    samples: 0,
                    checks: Vec::new(),
                });
            }
        }
    }

    let mut comparison = Vec::new();
    if let [h, d] = &results[..] {
        let mut table = Table::new(&["t", "sup_u_gap", "sup_v_gap"]);
        let mut worst: f64 = 0.0;
        for (t, ch) in h.times.iter().zip(&h.curves) {
            if let Some(j) = d.times.iter().position(|s| (s - t).abs() <= 1e-9 * t.max(1.0)) {
                let cd = &d.curves[j];
                let gu = vec3::max_distance(&ch.u.vector_samples(), &cd.u.vector_samples());
                let gv = vec3::max_distance(&ch.v.vector_samples(), &cd.v.vector_samples());
                worst = worst.max(gu);
                table.push(vec![*t, gu, gv]);
            }
        }
        write_table(&cfg.out, "discrepancy", &table, format, &mut files)?;
        comparison.push(Measurement::at_most("max sup|u_H - u_D|", worst, 1e-3));
    }

    paths.extend(results.into_iter().map(|r| r.report));
    let violated = paths.iter().flat_map(|p| &p.checks).chain(&comparison).any(|m| !m.passed());
    let outcome = if aborted {
        Outcome::Aborted
    } else if violated {
        Outcome::Violated
    } else {
        Outcome::Passed
    };
    let report_path = cfg.out.join("report.json");
    files.push(report_path.clone());
    let report = RunReport {
        config: cfg.clone(),
        scenario: scenario.name(),
        outcome,
        paths,
        comparison,
        files,
    };
    let text = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
    std::fs::write(&report_path, text).map_err(|e| format!("cannot write {}: {e}", report_path.display()))?;
    Ok(report)
}
