//! Nonlinearity `F_β`, monodromy drift `B`, and the exponential Picard
//! stepper for `Y = (P, Q)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::propagator::propagate;
use crate::error::{ElasticaError, Result};
use crate::hasimoto::{compute_alpha, monodromy_drift, HasimotoState};
use crate::spectral::{padded_len, y_norm, PeriodicField, SobolevIndex};
use crate::tension::solve_mu;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// The three parts of `F_β(Y)`. The `Q` components of `F⁽²⁾` and `F⁽³⁾`
/// vanish identically and are not stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Nonlinearity {
    /// `iα P`, `iα Q`
    pub f1: (PeriodicField, PeriodicField),
    /// `2 (∂s μ) Q + μ (∂s + iβ) Q`
    pub f2: PeriodicField,
    /// `−4 Re(Q̄ ∂s Q) Q − i Im(Q̄ ∂s Q) Q − iβ |Q|² Q`
    pub f3: PeriodicField,
    pub alpha: PeriodicField,
    pub mu: PeriodicField,
}

impl Nonlinearity {
    /// `F⁽¹⁾ + F⁽²⁾ + sign·F⁽³⁾`.
    pub fn combine(&self, f3_sign: f64) -> (PeriodicField, PeriodicField) {
        let p = &(&self.f1.0 + &self.f2) + &(self.f3.clone() * f3_sign);
        (p, self.f1.1.clone())
    }

    pub fn sum(&self) -> (PeriodicField, PeriodicField) {
        self.combine(1.0)
    }
}

/// Evaluates `F_β(P, Q)`; products are formed on the padded grid.
pub fn nonlinearity(p: &PeriodicField, q: &PeriodicField, beta: f64) -> Result<Nonlinearity> {
    let grid = q.grid();
    let len = padded_len(grid);
    let alpha = compute_alpha(p, q)?;
    let mu = solve_mu(p, q, beta)?;
    let a = alpha.samples_on(len);
    let m = mu.samples_on(len);
    let ms = mu.differentiate(1, 0.0).samples_on(len);
    let ps = p.samples_on(len);
    let qs = q.samples_on(len);
    let dq = q.differentiate(1, 0.0).samples_on(len);
    let dq_shift = q.differentiate(1, beta).samples_on(len);

    let mut f1p = Vec::with_capacity(len);
    let mut f1q = Vec::with_capacity(len);
    let mut f2 = Vec::with_capacity(len);
    let mut f3 = Vec::with_capacity(len);
    for j in 0..len {
        let ia = I * a[j].re;
        f1p.push(ia * ps[j]);
        f1q.push(ia * qs[j]);
        f2.push(2.0 * ms[j].re * qs[j] + m[j].re * dq_shift[j]);
        let w = qs[j].conj() * dq[j];
        f3.push((-4.0 * w.re - I * w.im - I * beta * qs[j].norm_sqr()) * qs[j]);
    }
    let back = |v: &[Complex64]| PeriodicField::from_padded_samples(grid, v);
    Ok(Nonlinearity {
        f1: (back(&f1p)?, back(&f1q)?),
        f2: back(&f2)?,
        f3: back(&f3)?,
        alpha,
        mu,
    })
}

/// `B(Y) = ∮ Im(Q̄ P) ds/2π`.
pub fn monodromy_drift_b(p: &PeriodicField, q: &PeriodicField) -> f64 {
    monodromy_drift(p, q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quadrature {
    /// `∫₀^dt V(dt−τ) F dτ ≈ dt V(dt/2) F(Ŷ)` at the midpoint state.
    Midpoint,
    /// `≈ dt/2 [V(dt) F(Yₙ) + F(Yₙ₊₁)]`.
    Trapezoidal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepOptions {
    pub picard_tol: f64,
    pub max_iter: usize,
    pub quadrature: Quadrature,
    /// Sign applied to `F⁽³⁾`; `−1` injects a deliberate error.
    pub f3_sign: f64,
}

impl Default for StepOptions {
    fn default() -> Self {
        Self {
            picard_tol: 1e-10,
            max_iter: 25,
            quadrature: Quadrature::Midpoint,
            f3_sign: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub state: HasimotoState,
    pub iterations: usize,
    /// Ratio of the last two successive Picard differences (NaN if only one).
    pub contraction: f64,
    /// `P` and `α` at `s = 0` at the step midpoint, for transporting the frame.
    pub mid_p0: Complex64,
    pub mid_alpha0: f64,
}

fn y0_norm(p: &PeriodicField, q: &PeriodicField) -> f64 {
    y_norm(p, q, SobolevIndex::new(0.0).expect("0 is a valid index"))
}

fn value_at_zero(f: &PeriodicField) -> Complex64 {
    f.modes().iter().sum()
}

/// One step of the Duhamel map
///
/// ```text
/// Yₙ₊₁ = V(dt) Yₙ + ∫₀^dt V(dt−τ) F_β(Y(τ)) dτ,   βₙ₊₁ = βₙ + ∫ B(Y),
/// ```
///
/// with `β` frozen at the midpoint estimate inside each Picard sweep.
pub fn step_hasimoto(y: &HasimotoState, dt: f64, opts: &StepOptions) -> Result<StepOutcome> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(ElasticaError::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    let (p0, q0, b0) = (&y.p, &y.q, y.beta);
    let drift0 = monodromy_drift(p0, q0);
    let (mut p1, mut q1) = propagate(p0, q0, b0, dt);
    let mut b1 = b0 + dt * drift0;
    // F(Yₙ) is reused by every trapezoidal sweep
    let start = match opts.quadrature {
        Quadrature::Trapezoidal => Some(nonlinearity(p0, q0, b0)?),
        Quadrature::Midpoint => None,
    };

    let mut prev_diff = f64::NAN;
    let mut contraction = f64::NAN;
    for it in 1..=opts.max_iter {
        let bm = 0.5 * (b0 + b1);
        let (pf, qf) = propagate(p0, q0, bm, dt);
        let (np, nq, nb, mid_p0, mid_alpha0) = match opts.quadrature {
            Quadrature::Midpoint => {
                let (pa, qa) = propagate(p0, q0, bm, 0.5 * dt);
                let (pb, qb) = propagate(&p1, &q1, bm, -0.5 * dt);
                let pm = (&pa + &pb) * 0.5;
                let qm = (&qa + &qb) * 0.5;
                let f = nonlinearity(&pm, &qm, bm)?;
                let (fp, fq) = f.combine(opts.f3_sign);
                let (gp, gq) = propagate(&fp, &fq, bm, 0.5 * dt);
                let np = &pf + &(gp * dt);
                let nq = &qf + &(gq * dt);
                let nb = b0 + dt * monodromy_drift(&pm, &qm);
                (np, nq, nb, value_at_zero(&pm), value_at_zero(&f.alpha).re)
            }
            Quadrature::Trapezoidal => {
                let f0 = start.as_ref().expect("computed above");
                let (f0p, f0q) = f0.combine(opts.f3_sign);
                let (g0p, g0q) = propagate(&f0p, &f0q, bm, dt);
                let f1 = nonlinearity(&p1, &q1, b1)?;
                let (f1p, f1q) = f1.combine(opts.f3_sign);
                let np = &pf + &((&g0p + &f1p) * (0.5 * dt));
                let nq = &qf + &((&g0q + &f1q) * (0.5 * dt));
                let nb = b0 + 0.5 * dt * (drift0 + monodromy_drift(&p1, &q1));
                let mid_p0 = 0.5 * (value_at_zero(p0) + value_at_zero(&p1));
                let mid_alpha0 = 0.5 * (value_at_zero(&f0.alpha).re + value_at_zero(&f1.alpha).re);
                (np, nq, nb, mid_p0, mid_alpha0)
            }
        };
        if !(np.is_finite() && nq.is_finite() && nb.is_finite()) {
            return Err(ElasticaError::NonFinite { time: dt });
        }
        let diff = y0_norm(&(&np - &p1), &(&nq - &q1)) + (nb - b1).abs();
        if prev_diff.is_finite() && prev_diff > 0.0 {
            contraction = diff / prev_diff;
        }
        prev_diff = diff;
        p1 = np;
        q1 = nq;
        b1 = nb;
        if diff < opts.picard_tol {
            return Ok(StepOutcome {
                state: HasimotoState {
                    p: p1,
                    q: q1,
                    beta: b1,
                },
                iterations: it,
                contraction,
                mid_p0,
                mid_alpha0,
            });
        }
    }
    Err(ElasticaError::NonConvergence {
        iterations: opts.max_iter,
        last_change: prev_diff,
    })
}

fn imag_defect(f: &PeriodicField) -> f64 {
    f.conj().modes().iter().zip(f.modes()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) * 0.5
}

/// Real-valued fast path: `α = β = 0` and real `P`, `Q`.
pub fn step_planar(y: &HasimotoState, dt: f64, opts: &StepOptions) -> Result<StepOutcome> {
    let imag = imag_defect(&y.p).max(imag_defect(&y.q));
    if imag > 1e-10 {
        return Err(ElasticaError::NotReal { imag });
    }
    if y.beta != 0.0 {
        return Err(ElasticaError::InvalidParameter(format!(
            "planar stepping requires beta = 0, got {}",
            y.beta
        )));
    }
    let (p0, q0) = (y.p.real_part(), y.q.real_part());
    let (pf, qf) = propagate(&p0, &q0, 0.0, dt);
    let (mut p1, mut q1) = (pf.clone(), qf.clone());
    let mut prev_diff = f64::NAN;
    let mut contraction = f64::NAN;
    let f0 = match opts.quadrature {
        Quadrature::Trapezoidal => Some(nonlinearity(&p0, &q0, 0.0)?),
        Quadrature::Midpoint => None,
    };
    for it in 1..=opts.max_iter {
        let (np, nq, mid_p0) = match opts.quadrature {
            Quadrature::Midpoint => {
                let (pa, qa) = propagate(&p0, &q0, 0.0, 0.5 * dt);
                let (pb, qb) = propagate(&p1, &q1, 0.0, -0.5 * dt);
                let pm = ((&pa + &pb) * 0.5).real_part();
                let qm = ((&qa + &qb) * 0.5).real_part();
                // α ≡ 0 for real data, so F⁽¹⁾ drops out
                let f = nonlinearity(&pm, &qm, 0.0)?;
                let fp = &f.f2 + &(f.f3.clone() * opts.f3_sign);
                let zero = PeriodicField::zeros(fp.grid(), 1)?;
                let (gp, gq) = propagate(&fp, &zero, 0.0, 0.5 * dt);
                (&pf + &(gp * dt), &qf + &(gq * dt), value_at_zero(&pm))
            }
            Quadrature::Trapezoidal => {
                let f0 = f0.as_ref().expect("computed above");
                let g0 = &f0.f2 + &(f0.f3.clone() * opts.f3_sign);
                let zero = PeriodicField::zeros(g0.grid(), 1)?;
                let (g0p, g0q) = propagate(&g0, &zero, 0.0, dt);
                let f1 = nonlinearity(&p1, &q1, 0.0)?;
                let g1 = &f1.f2 + &(f1.f3.clone() * opts.f3_sign);
                let np = &pf + &((&g0p + &g1) * (0.5 * dt));
                let nq = &qf + &(g0q * (0.5 * dt));
                (np, nq, 0.5 * (value_at_zero(&p0) + value_at_zero(&p1)))
            }
        };
        let (np, nq) = (np.real_part(), nq.real_part());
        if !(np.is_finite() && nq.is_finite()) {
            return Err(ElasticaError::NonFinite { time: dt });
        }
        let diff = y0_norm(&(&np - &p1), &(&nq - &q1));
        if prev_diff.is_finite() && prev_diff > 0.0 {
            contraction = diff / prev_diff;
        }
        prev_diff = diff;
        p1 = np;
        q1 = nq;
        if diff < opts.picard_tol {
            return Ok(StepOutcome {
                state: HasimotoState {
                    p: p1,
                    q: q1,
                    beta: 0.0,
                },
                iterations: it,
                contraction,
                mid_p0,
                mid_alpha0: 0.0,
            });
        }
    }
    Err(ElasticaError::NonConvergence {
        iterations: opts.max_iter,
        last_change: prev_diff,
    })
}
