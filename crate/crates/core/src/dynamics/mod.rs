//! Time evolution along two independent paths: the Hasimoto variables with an
//! exponential Picard stepper, and the direct constrained wave equation for
//! `(u, ∂t u)` as an oracle.

mod direct;
mod propagator;
mod stepper;

pub use direct::{direct_dt, evolve_direct, rhs_direct, DirectOptions, DIRECT_STABILITY};
pub use propagator::{propagate, propagator, ModePropagator};
pub use stepper::{
    monodromy_drift_b, nonlinearity, step_hasimoto, step_planar, Nonlinearity, Quadrature, StepOptions,
    StepOutcome,
};

use serde::{Deserialize, Serialize};

use crate::error::{ElasticaError, Result};
use crate::geometry::{check_compatibility, energies, torsion, CurveState};
use crate::hasimoto::{forward_transform, inverse_transform, HasimotoState, Triad, PERIODICITY_TOL};
use crate::tension::lowest_eigenvalue_from_squared;
use crate::vec3::{self, Vec3};

/// Per-sample record shared by both evolution paths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub t: f64,
    /// NaN when the loop is open (`∮ v ≠ 0`) and `∂t x` is not periodic.
    pub kinetic: f64,
    pub potential: f64,
    pub energy: f64,
    /// `|∮ u ds/2π|`
    pub closure_defect: f64,
    pub closure: Vec3,
    pub unit_defect: f64,
    pub orthogonality_defect: f64,
    pub beta: f64,
    pub e0: f64,
    pub picard_iters: usize,
    pub contraction: f64,
    /// Direct path only: constraint drift removed by the last projections.
    pub projection_drift: f64,
}

impl Diagnostics {
    fn measure(t: f64, curve: &CurveState, beta: f64, picard_iters: usize, contraction: f64) -> Result<Self> {
        let (kinetic, potential, energy) = match energies(curve) {
            Ok(e) => (e.kinetic, e.potential, e.total),
            Err(ElasticaError::OpenLoop { .. }) => {
                let v = 0.5 * curve.u.differentiate(1, 0.0).sobolev_norm(crate::SobolevIndex::new(0.0)?).powi(2);
                (f64::NAN, v, f64::NAN)
            }
            Err(e) => return Err(e),
        };
        let closure = curve.u.mean_vector();
        let compat = check_compatibility(&curve.u, &curve.v);
        let kappa2 = crate::geometry::curvature_squared(&curve.u)?;
        Ok(Self {
            t,
            kinetic,
            potential,
            energy,
            closure_defect: vec3::norm(closure),
            closure,
            unit_defect: compat.unit_defect,
            orthogonality_defect: compat.orthogonality_defect,
            beta,
            e0: lowest_eigenvalue_from_squared(&kappa2),
            picard_iters,
            contraction,
            projection_drift: 0.0,
        })
    }
}

/// A Hasimoto state together with the frame at `s = 0` that anchors the curve.
#[derive(Debug, Clone, PartialEq)]
pub struct HasimotoSample {
    pub state: HasimotoState,
    pub frame0: Triad,
    pub momentum: Vec3,
}

impl HasimotoSample {
    /// Forward transform of a curve state with the canonical seed.
    pub fn from_curve(curve: &CurveState) -> Result<Self> {
        let fw = forward_transform(&curve.u, &curve.v)?;
        Ok(Self {
            state: fw.state,
            frame0: fw.seed,
            momentum: curve.momentum,
        })
    }

    /// Reconstructs `(u, ∂t u)`.
    pub fn curve(&self) -> Result<CurveState> {
        let inv = inverse_transform(&self.state, &self.frame0)?;
        CurveState::new(inv.u0, inv.u1, self.momentum)
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory<S> {
    pub dt: f64,
    pub times: Vec<f64>,
    pub states: Vec<S>,
    pub diagnostics: Vec<Diagnostics>,
    /// Set when the run stopped early; the samples up to that point are kept.
    pub failure: Option<ElasticaError>,
}

impl<S> Trajectory<S> {
    fn new(dt: f64) -> Self {
        Self {
            dt,
            times: Vec::new(),
            states: Vec::new(),
            diagnostics: Vec::new(),
            failure: None,
        }
    }

    pub fn last(&self) -> Option<&S> {
        self.states.last()
    }

    pub fn completed(&self) -> bool {
        self.failure.is_none()
    }

    /// Largest relative energy change, `|E(t) − E(0)| / max(E(0), 1)`.
    pub fn energy_drift(&self) -> f64 {
        let Some(first) = self.diagnostics.first() else { return 0.0 };
        self.diagnostics
            .iter()
            .map(|d| (d.energy - first.energy).abs() / first.energy.max(1.0))
            .fold(0.0, f64::max)
    }
}

/// Number of steps of size `dt` in `[0, t_final]`; `dt` must divide `t_final`.
pub fn step_count(t_final: f64, dt: f64) -> Result<usize> {
    if !(t_final.is_finite() && t_final >= 0.0 && dt.is_finite() && dt > 0.0) {
        return Err(ElasticaError::InvalidParameter(format!(
            "need T >= 0 and dt > 0, got T = {t_final}, dt = {dt}"
        )));
    }
    let n = (t_final / dt).round();
    if (n * dt - t_final).abs() > 1e-9 * t_final.max(1.0) {
        return Err(ElasticaError::InvalidParameter(format!("dt = {dt} does not divide T = {t_final}")));
    }
    Ok(n as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolveOptions {
    pub step: StepOptions,
    /// Record a sample every this many steps (the last step is always kept).
    pub sample_every: usize,
    /// Use the real-valued stepper (requires real data with `β = 0`).
    pub planar: bool,
    /// How many times a failing step may be split in half.
    pub max_halvings: u32,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self {
            step: StepOptions::default(),
            sample_every: 1,
            planar: false,
            max_halvings: 4,
        }
    }
}

struct Advance {
    sample: HasimotoSample,
    iterations: usize,
    contraction: f64,
}

fn advance(sample: &HasimotoSample, dt: f64, opts: &EvolveOptions, halvings: u32) -> Result<Advance> {
    let attempt = if opts.planar {
        step_planar(&sample.state, dt, &opts.step)
    } else {
        step_hasimoto(&sample.state, dt, &opts.step)
    };
    match attempt {
        Ok(out) => {
            // R₀ ← R₀ exp(dt Ω_t) with Ω_t built from P(0) and α(0) at the midpoint
            let frame0 = sample
                .frame0
                .rotate(dt * out.mid_p0.re, dt * out.mid_p0.im, -dt * out.mid_alpha0)
                .orthonormalized();
            Ok(Advance {
                sample: HasimotoSample {
                    state: out.state,
                    frame0,
                    momentum: sample.momentum,
                },
                iterations: out.iterations,
                contraction: out.contraction,
            })
        }
        Err(ElasticaError::NonConvergence { .. }) if halvings < opts.max_halvings => {
            let a = advance(sample, 0.5 * dt, opts, halvings + 1)?;
            let b = advance(&a.sample, 0.5 * dt, opts, halvings + 1)?;
            Ok(Advance {
                sample: b.sample,
                iterations: a.iterations + b.iterations,
                contraction: a.contraction.max(b.contraction),
            })
        }
        Err(e) => Err(e),
    }
}

/// Integrates the Hasimoto system to `t_final`, reconstructing the curve at
/// every sample for diagnostics.
pub fn evolve_hasimoto(
    initial: &HasimotoSample,
    t_final: f64,
    dt: f64,
    opts: &EvolveOptions,
) -> Result<Trajectory<HasimotoSample>> {
    let steps = step_count(t_final, dt)?;
    if opts.sample_every == 0 {
        return Err(ElasticaError::InvalidParameter("sample_every must be positive".into()));
    }
    let inv = crate::hasimoto::integrate_inverse(&initial.state, &initial.frame0, crate::hasimoto::TRANSPORT_SUBSTEPS)?;
    if inv.periodicity_defect > PERIODICITY_TOL {
        return Err(ElasticaError::Incompatible {
            defect: inv.periodicity_defect,
        });
    }
    let mut traj = Trajectory::new(dt);
    let record = |traj: &mut Trajectory<HasimotoSample>, t: f64, s: HasimotoSample, it: usize, c: f64| -> Result<()> {
        let curve = s.curve()?;
        traj.diagnostics.push(Diagnostics::measure(t, &curve, s.state.beta, it, c)?);
        traj.times.push(t);
        traj.states.push(s);
        Ok(())
    };
    record(&mut traj, 0.0, initial.clone(), 0, f64::NAN)?;
    let mut current = initial.clone();
    let (mut iters, mut contraction) = (0usize, f64::NAN);
    for k in 1..=steps {
        let t = k as f64 * dt;
        match advance(&current, dt, opts, 0) {
            Ok(a) => {
                current = a.sample;
                iters = iters.max(a.iterations);
                contraction = if contraction.is_nan() {
                    a.contraction
                } else {
                    contraction.max(a.contraction)
                };
            }
            Err(e) => {
                traj.failure = Some(ElasticaError::StepFailed {
                    time: t - dt,
                    source: Box::new(e),
                });
                return Ok(traj);
            }
        }
        if k % opts.sample_every == 0 || k == steps {
            if let Err(e) = record(&mut traj, t, current.clone(), iters, contraction) {
                traj.failure = Some(ElasticaError::StepFailed {
                    time: t,
                    source: Box::new(e),
                });
                return Ok(traj);
            }
            iters = 0;
            contraction = f64::NAN;
        }
    }
    Ok(traj)
}

/// Diagnostics for a curve state produced by the direct path.
pub(crate) fn curve_diagnostics(t: f64, curve: &CurveState) -> Result<Diagnostics> {
    let beta = torsion(&curve.u).map(|(_, m)| m.monodromy).unwrap_or(f64::NAN);
    Diagnostics::measure(t, curve, beta, 0, f64::NAN)
}

pub(crate) fn push_curve_sample(traj: &mut Trajectory<CurveState>, t: f64, curve: CurveState) -> Result<()> {
    traj.diagnostics.push(curve_diagnostics(t, &curve)?);
    traj.times.push(t);
    traj.states.push(curve);
    Ok(())
}

pub(crate) fn new_trajectory<S>(dt: f64) -> Trajectory<S> {
    Trajectory::new(dt)
}
