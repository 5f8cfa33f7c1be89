//! The periodic Schrödinger operator `L = −∂s² + κ²` in the mode basis.
//!
//! The Galerkin system uses the symmetric band `|n| <= N/2 - 1`, so the matrix
//! is Hermitian whenever `κ²` is real. Solves are dense (Cholesky, with an LU
//! fallback) and eigenvalues come from a dense Hermitian eigensolve.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{ElasticaError, Result};
use crate::geometry::{curvature_squared, CurveState};
use crate::spectral::{padded_len, PeriodicField, SobolevIndex};
use crate::vec3;

/// Relative residual accepted from a dense solve.
pub const SOLVE_RESIDUAL_TOL: f64 = 1e-10;

/// `(−∂s² + κ²) x = f` with periodic boundary conditions.
#[derive(Debug, Clone)]
pub struct EllipticProblem {
    pub kappa2: PeriodicField,
    pub rhs: PeriodicField,
}

impl EllipticProblem {
    pub fn new(kappa2: PeriodicField, rhs: PeriodicField) -> Result<Self> {
        if kappa2.grid() != rhs.grid() {
            return Err(ElasticaError::GridMismatch {
                left: kappa2.grid(),
                right: rhs.grid(),
            });
        }
        Ok(Self { kappa2, rhs })
    }

    pub fn solve(&self) -> Result<PeriodicField> {
        solve_elliptic(&self.kappa2, &self.rhs)
    }
}

fn band(grid: usize) -> std::ops::Range<i64> {
    let half = (grid / 2) as i64;
    (-half + 1)..half
}

fn to_vector(f: &PeriodicField) -> DVector<Complex64> {
    DVector::from_iterator(f.grid() - 1, band(f.grid()).map(|n| f.mode(n)))
}

fn from_vector(grid: usize, x: &DVector<Complex64>) -> Result<PeriodicField> {
    let mut out = PeriodicField::zeros(grid, 1)?;
    for (i, n) in band(grid).enumerate() {
        out.set_mode(n, x[i]);
    }
    Ok(out)
}

/// Mode matrix `M[n,m] = n² δ_{nm} + κ̂²(n−m)` on `|n|, |m| <= N/2 − 1`.
pub fn assemble_operator(kappa2: &PeriodicField) -> DMatrix<Complex64> {
    let grid = kappa2.grid();
    let half = (grid / 2) as i64;
    let modes: Vec<i64> = band(grid).collect();
    let dim = modes.len();
    let coeff = |k: i64| {
        if k.abs() < half {
            kappa2.mode(k)
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    DMatrix::from_fn(dim, dim, |i, j| {
        let n = modes[i];
        let m = modes[j];
        let diag = if i == j { (n * n) as f64 } else { 0.0 };
        coeff(n - m) + diag
    })
}

/// Largest `|M[i,j] − conj M[j,i]|`.
pub fn hermiticity_defect(m: &DMatrix<Complex64>) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Applies the operator to `x` in the mode basis.
pub fn apply_operator(kappa2: &PeriodicField, x: &PeriodicField) -> Result<PeriodicField> {
    let m = assemble_operator(kappa2);
    from_vector(x.grid(), &(m * to_vector(x)))
}

pub fn solve_elliptic(kappa2: &PeriodicField, f: &PeriodicField) -> Result<PeriodicField> {
    if kappa2.grid() != f.grid() {
        return Err(ElasticaError::GridMismatch {
            left: kappa2.grid(),
            right: f.grid(),
        });
    }
    let m = assemble_operator(kappa2);
    let b = to_vector(f);
    let x = match Cholesky::new(m.clone()) {
        Some(ch) => ch.solve(&b),
        None => m
            .clone()
            .lu()
            .solve(&b)
            .ok_or_else(|| ElasticaError::SolverFailure("mode matrix is singular".into()))?,
    };
    let residual = (&m * &x - &b).norm();
    let scale = b.norm().max(f64::MIN_POSITIVE);
    if residual.is_nan() || residual > SOLVE_RESIDUAL_TOL * scale {
        return Err(ElasticaError::SolverFailure(format!(
            "relative residual {:e} exceeds {SOLVE_RESIDUAL_TOL:e}",
            residual / scale
        )));
    }
    from_vector(f.grid(), &x)
}

/// Tension `λ` from `(−∂s² + κ²)(λ + 2κ²) = |∂t u|² + 2κ⁴ − |∂s² u|²`.
pub fn solve_tension(state: &CurveState) -> Result<PeriodicField> {
    let grid = state.grid();
    let len = padded_len(grid);
    let us = state.u.differentiate(1, 0.0).vector_samples_on(len);
    let uss = state.u.differentiate(2, 0.0).vector_samples_on(len);
    let v = state.v.vector_samples_on(len);
    let rhs: Vec<f64> = (0..len)
        .map(|j| {
            let k2 = vec3::dot(us[j], us[j]);
            vec3::dot(v[j], v[j]) + 2.0 * k2 * k2 - vec3::dot(uss[j], uss[j])
        })
        .collect();
    let kappa2 = curvature_squared(&state.u)?;
    let f = PeriodicField::from_padded_real(grid, &rhs)?;
    let shifted = solve_elliptic(&kappa2, &f)?;
    Ok((shifted - kappa2 * 2.0).real_part())
}

/// `μ` from `(−∂s² + |Q|²) μ = |P|² + |Q|⁴ − |(∂s + iβ)Q|²`.
pub fn solve_mu(p: &PeriodicField, q: &PeriodicField, beta: f64) -> Result<PeriodicField> {
    let grid = q.grid();
    if q.sobolev_norm(SobolevIndex::new(0.0)?) < 1e-12 {
        return Err(ElasticaError::SingularOperator);
    }
    let len = padded_len(grid);
    let ps = p.samples_on(len);
    let qs = q.samples_on(len);
    let dq = q.differentiate(1, beta).samples_on(len);
    let mut k2 = Vec::with_capacity(len);
    let mut rhs = Vec::with_capacity(len);
    for j in 0..len {
        let a = qs[j].norm_sqr();
        k2.push(a);
        rhs.push(ps[j].norm_sqr() + a * a - dq[j].norm_sqr());
    }
    let kappa2 = PeriodicField::from_padded_real(grid, &k2)?;
    let f = PeriodicField::from_padded_real(grid, &rhs)?;
    Ok(solve_elliptic(&kappa2, &f)?.real_part())
}

/// Smallest eigenvalue of the mode matrix for curvature `κ`.
pub fn lowest_eigenvalue(kappa: &PeriodicField) -> Result<f64> {
    let kappa2 = kappa.multiply(kappa)?.real_part();
    Ok(lowest_eigenvalue_from_squared(&kappa2))
}

pub fn lowest_eigenvalue_from_squared(kappa2: &PeriodicField) -> f64 {
    let m = assemble_operator(kappa2);
    SymmetricEigen::new(m)
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

/// All eigenvalues, ascending.
pub fn spectrum(kappa2: &PeriodicField) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(assemble_operator(kappa2))
        .eigenvalues
        .iter()
        .cloned()
        .collect();
    ev.sort_by(f64::total_cmp);
    ev
}

#[derive(Debug, Clone)]
pub struct ResolventCheck {
    pub direct: PeriodicField,
    pub iterative: PeriodicField,
    pub discrepancy: f64,
    pub iterations: usize,
}

/// Solves `L μ = f` by iterating
/// `μ ← (−∂s²+1)⁻¹ f − (−∂s²+1)⁻¹ (κ²−1) μ` and compares with the dense solve.
pub fn resolvent_crosscheck(
    kappa: &PeriodicField,
    f: &PeriodicField,
    tol: f64,
    max_iter: usize,
) -> Result<ResolventCheck> {
    let grid = kappa.grid();
    let kappa2 = kappa.multiply(kappa)?.real_part();
    let direct = solve_elliptic(&kappa2, f)?;
    let mut perturbation = kappa2.clone();
    perturbation.set_mode(0, kappa2.mode(0) - 1.0);

    let inv_free = |g: &PeriodicField| -> PeriodicField {
        let mut out = g.clone();
        for n in band(grid).chain(std::iter::once(-((grid / 2) as i64))) {
            let k = n as f64;
            out.set_mode(n, g.mode(n) / (k * k + 1.0));
        }
        out.without_nyquist()
    };

    let base = inv_free(f);
    let mut mu = base.clone();
    let mut prev_change = f64::INFINITY;
    let mut growth_streak = 0;
    let norm = |g: &PeriodicField| g.modes().iter().map(|m| m.norm_sqr()).sum::<f64>().sqrt();
    for it in 1..=max_iter {
        let next = &base - &inv_free(&perturbation.multiply(&mu)?);
        let change = norm(&(&next - &mu));
        mu = next;
        if change <= tol * norm(&mu).max(1.0) {
            let discrepancy = norm(&(&mu - &direct));
            return Ok(ResolventCheck {
                direct,
                iterative: mu,
                discrepancy,
                iterations: it,
            });
        }
        if change > prev_change {
            growth_streak += 1;
            if growth_streak >= 3 || !change.is_finite() {
                return Err(ElasticaError::NonConvergence {
                    iterations: it,
                    last_change: change,
                });
            }
        } else {
            growth_streak = 0;
        }
        prev_change = change;
    }
    Err(ElasticaError::NonConvergence {
        iterations: max_iter,
        last_change: prev_change,
    })
}
