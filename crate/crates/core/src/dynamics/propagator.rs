//! Exact per-mode solution of the linear part
//! `d/dt (P̂, Q̂) = [[0, ik³], [ik, 0]] (P̂, Q̂)`, `k = n + β`, for frozen `β`.

use num_complex::Complex64;

use crate::spectral::{wavenumber, PeriodicField};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModePropagator {
    pub n: i64,
    pub beta: f64,
    pub dt: f64,
    pub matrix: [[Complex64; 2]; 2],
}

/// `sin(x)/x`, accurate through `x = 0`.
fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// `cos(k²dt) I + sin(k²dt) k⁻² Ĝ`, with the `k → 0` limit taken analytically.
pub fn propagator(n: i64, beta: f64, dt: f64) -> ModePropagator {
    let k = n as f64 + beta;
    let theta = k * k * dt;
    let (s, c) = theta.sin_cos();
    let c = Complex64::new(c, 0.0);
    ModePropagator {
        n,
        beta,
        dt,
        matrix: [[c, I * (k * s)], [I * (k * dt * sinc(theta)), c]],
    }
}

impl ModePropagator {
    pub fn apply(&self, p: Complex64, q: Complex64) -> (Complex64, Complex64) {
        let m = &self.matrix;
        (m[0][0] * p + m[0][1] * q, m[1][0] * p + m[1][1] * q)
    }

    /// Operator norm for `|(a, b)|ₙ² = |a|² + w(n)²|b|²`, `w(n)² = 1 + n²`.
    pub fn weighted_norm(&self) -> f64 {
        let w = (1.0 + (self.n * self.n) as f64).sqrt();
        let m = &self.matrix;
        let a = [[m[0][0], m[0][1] / w], [m[1][0] * w, m[1][1]]];
        // largest singular value of a 2×2 matrix
        let fro: f64 = a.iter().flatten().map(|z| z.norm_sqr()).sum();
        let det = (a[0][0] * a[1][1] - a[0][1] * a[1][0]).norm_sqr();
        (0.5 * (fro + (fro * fro - 4.0 * det).max(0.0).sqrt())).sqrt()
    }

    /// Closed-form bound `6 e^{2ε}` on [`weighted_norm`](Self::weighted_norm),
    /// with `ε = min(|ln(w/|k|)|, max(|k| w, |k|³/w) dt)`.
    pub fn norm_bound(&self) -> f64 {
        let k = (self.n as f64 + self.beta).abs();
        let w = (1.0 + (self.n * self.n) as f64).sqrt();
        let growth = (k * w).max(k * k * k / w) * self.dt.abs();
        let eps = if k == 0.0 { growth } else { (w / k).ln().abs().min(growth) };
        6.0 * (2.0 * eps).exp()
    }
}

/// Applies the propagator to every retained mode of `(P, Q)`; the Nyquist
/// slot is cleared.
pub fn propagate(p: &PeriodicField, q: &PeriodicField, beta: f64, dt: f64) -> (PeriodicField, PeriodicField) {
    let grid = q.grid();
    let mut p_out = p.clone();
    let mut q_out = q.clone();
    for j in 0..grid {
        let n = wavenumber(j, grid);
        let (a, b) = propagator(n, beta, dt).apply(p.modes()[j], q.modes()[j]);
        p_out.modes_mut()[j] = a;
        q_out.modes_mut()[j] = b;
    }
    (p_out.without_nyquist(), q_out.without_nyquist())
}
