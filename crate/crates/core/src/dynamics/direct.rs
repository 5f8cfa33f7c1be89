//! Oracle integrator for `∂t u = v`, `∂t v = −∂s⁴u + ∂s²(λu)` with classical
//! RK4, projecting back onto `|u| = 1`, `u·v = 0` after every step.

use serde::{Deserialize, Serialize};

use super::{new_trajectory, push_curve_sample, step_count, Trajectory};
use crate::error::{ElasticaError, Result};
use crate::geometry::CurveState;
use crate::spectral::{PeriodicField, SobolevIndex};
use crate::tension::solve_tension;
use crate::vec3;

/// Default stability constant: `dt <= DIRECT_STABILITY / N²`.
///
/// The linear part has frequencies `n²`, so RK4 on the imaginary axis
/// (stable up to `|z| = 2√2`) needs `(N/2)² dt <= 2.8`.
pub const DIRECT_STABILITY: f64 = 8.0;

/// Recommended step for grid size `grid`: the largest `dt <= 0.1 / N²` that
/// divides `t_final` into a whole number of steps.
pub fn direct_dt(grid: usize, t_final: f64) -> f64 {
    let target = 0.1 / (grid * grid) as f64;
    if t_final.is_nan() || t_final <= 0.0 {
        return target;
    }
    t_final / (t_final / target).ceil()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectOptions {
    pub sample_every: usize,
    pub stability: f64,
    /// Largest accepted per-step growth factor of `‖v‖ + ‖∂s u‖`.
    pub growth_limit: f64,
}

impl Default for DirectOptions {
    fn default() -> Self {
        Self {
            sample_every: 1,
            stability: DIRECT_STABILITY,
            growth_limit: 10.0,
        }
    }
}

/// `(∂t u, ∂t v) = (v, −∂s⁴u + ∂s²(λu))` with `λ` from the tension equation.
pub fn rhs_direct(state: &CurveState) -> Result<(PeriodicField, PeriodicField)> {
    let lambda = solve_tension(state)?;
    let lu = lambda.multiply(&state.u)?;
    let dv = &lu.differentiate(2, 0.0) - &state.u.differentiate(4, 0.0);
    Ok((state.v.clone(), dv))
}

fn project(u: &PeriodicField, v: &PeriodicField) -> Result<(PeriodicField, PeriodicField, f64)> {
    let us = u.vector_samples();
    let vs = v.vector_samples();
    let mut drift: f64 = 0.0;
    let mut nu = Vec::with_capacity(us.len());
    let mut nv = Vec::with_capacity(us.len());
    for (a, b) in us.iter().zip(&vs) {
        drift = drift.max((vec3::norm(*a) - 1.0).abs()).max(vec3::dot(*a, *b).abs());
        let a = vec3::normalize(*a);
        nv.push(vec3::axpy(-vec3::dot(a, *b), a, *b));
        nu.push(a);
    }
    Ok((
        PeriodicField::from_vector_samples(&nu)?,
        PeriodicField::from_vector_samples(&nv)?,
        drift,
    ))
}

fn size(state: &CurveState) -> f64 {
    let r0 = SobolevIndex::new(0.0).expect("0 is a valid index");
    state.v.sobolev_norm(r0) + state.u.differentiate(1, 0.0).sobolev_norm(r0)
}

/// Integrates to `t_final`. The largest pre-projection constraint drift since
/// the previous sample is stored in each sample's diagnostics.
pub fn evolve_direct(
    initial: &CurveState,
    t_final: f64,
    dt: f64,
    opts: &DirectOptions,
) -> Result<Trajectory<CurveState>> {
    let steps = step_count(t_final, dt)?;
    let grid = initial.grid();
    let limit = opts.stability / (grid * grid) as f64;
    if dt > limit {
        return Err(ElasticaError::InvalidParameter(format!(
            "dt = {dt:e} exceeds the explicit stability limit {limit:e} for N = {grid}"
        )));
    }
    if opts.sample_every == 0 {
        return Err(ElasticaError::InvalidParameter("sample_every must be positive".into()));
    }
    let mut traj = new_trajectory(dt);
    push_curve_sample(&mut traj, 0.0, initial.clone())?;
    let mut cur = initial.clone();
    let mut drift: f64 = 0.0;
    let m = cur.momentum;
    let shifted = |s: &CurveState, k: &(PeriodicField, PeriodicField), h: f64| -> Result<CurveState> {
        CurveState::new(&s.u + &(k.0.clone() * h), &s.v + &(k.1.clone() * h), m)
    };
    for step in 1..=steps {
        let t = step as f64 * dt;
        let result = (|| -> Result<CurveState> {
            let k1 = rhs_direct(&cur)?;
            let k2 = rhs_direct(&shifted(&cur, &k1, 0.5 * dt)?)?;
            let k3 = rhs_direct(&shifted(&cur, &k2, 0.5 * dt)?)?;
            let k4 = rhs_direct(&shifted(&cur, &k3, dt)?)?;
            let du = &(&k1.0 + &k4.0) + &((&k2.0 + &k3.0) * 2.0);
            let dv = &(&k1.1 + &k4.1) + &((&k2.1 + &k3.1) * 2.0);
            let u = &cur.u + &(du * (dt / 6.0));
            let v = &cur.v + &(dv * (dt / 6.0));
            if !(u.is_finite() && v.is_finite()) {
                return Err(ElasticaError::NonFinite { time: t });
            }
            let (u, v, d) = project(&u, &v)?;
            drift = drift.max(d);
            let next = CurveState::new(u, v, m)?;
            let growth = size(&next) / size(&cur).max(1.0);
            if growth > opts.growth_limit {
                return Err(ElasticaError::Unstable { time: t, growth });
            }
            Ok(next)
        })();
        match result {
            Ok(next) => cur = next,
            Err(e) => {
                traj.failure = Some(ElasticaError::StepFailed {
                    time: t - dt,
                    source: Box::new(e),
                });
                return Ok(traj);
            }
        }
        if step % opts.sample_every == 0 || step == steps {
            if let Err(e) = push_curve_sample(&mut traj, t, cur.clone()) {
                traj.failure = Some(ElasticaError::StepFailed {
                    time: t,
                    source: Box::new(e),
                });
                return Ok(traj);
            }
            if let Some(d) = traj.diagnostics.last_mut() {
                d.projection_drift = drift;
            }
            drift = 0.0;
        }
    }
    Ok(traj)
}
