//! Curve-level quantities computed from the unit tangent field.
//!
//! Pointwise nonlinear expressions are evaluated on the 3/2-padded grid and
//! projected back onto the `N` retained modes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ElasticaError, Result};
use crate::spectral::{padded_len, PeriodicField};
use crate::vec3::{self, Vec3};

/// Curvature below which the Serret–Frenet frame is considered undefined.
pub const KAPPA_MIN: f64 = 1e-6;

/// Tolerance on `|∮ v ds/2π|` for a state to count as a closed loop.
pub const CLOSED_LOOP_TOL: f64 = 1e-8;

/// Tangent field, its time derivative and the conserved mean of `∂t x`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveState {
    pub u: PeriodicField,
    pub v: PeriodicField,
    pub momentum: Vec3,
}

impl CurveState {
    pub fn new(u: PeriodicField, v: PeriodicField, momentum: Vec3) -> Result<Self> {
        for f in [&u, &v] {
            if f.components() != 3 {
                return Err(ElasticaError::ComponentMismatch {
                    left: 3,
                    right: f.components(),
                });
            }
        }
        if u.grid() != v.grid() {
            return Err(ElasticaError::GridMismatch {
                left: u.grid(),
                right: v.grid(),
            });
        }
        Ok(Self { u, v, momentum })
    }

    pub fn grid(&self) -> usize {
        self.u.grid()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrenetData {
    pub kappa: PeriodicField,
    pub theta: PeriodicField,
    pub normal: PeriodicField,
    pub binormal: PeriodicField,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Torsion {
    /// Mean torsion `∮ θ ds/2π`.
    pub monodromy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Energies {
    pub kinetic: f64,
    pub potential: f64,
    pub total: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompatibilityReport {
    /// `max | |u0| - 1 |`
    pub unit_defect: f64,
    /// `max |u0 · u1|`
    pub orthogonality_defect: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Position {
    /// `x(s_j)` at the `N` grid points.
    pub samples: Vec<Vec3>,
    /// `∮ u ds/2π`, so that `x(s + 2π) - x(s) = 2π · closure_defect`.
    pub closure_defect: Vec3,
}

fn padded_vectors(f: &PeriodicField) -> Vec<Vec3> {
    f.vector_samples_on(padded_len(f.grid()))
}

/// `κ = |∂s u|`.
pub fn curvature(u: &PeriodicField) -> Result<PeriodicField> {
    let us = padded_vectors(&u.differentiate(1, 0.0));
    let kappa: Vec<f64> = us.iter().map(|&x| vec3::norm(x)).collect();
    PeriodicField::from_padded_real(u.grid(), &kappa)
}

/// `κ²` as a product of band-limited fields.
pub fn curvature_squared(u: &PeriodicField) -> Result<PeriodicField> {
    let us = padded_vectors(&u.differentiate(1, 0.0));
    let k2: Vec<f64> = us.iter().map(|&x| vec3::dot(x, x)).collect();
    PeriodicField::from_padded_real(u.grid(), &k2)
}

fn check_nondegenerate(kappa2: &[f64]) -> Result<()> {
    let min = kappa2.iter().cloned().fold(f64::INFINITY, f64::min).max(0.0).sqrt();
    if min < KAPPA_MIN {
        return Err(ElasticaError::DegenerateCurvature {
            min_kappa: min,
            threshold: KAPPA_MIN,
        });
    }
    Ok(())
}

/// `θ = u·(∂s u × ∂s² u)/|∂s u|²` together with its mean (the monodromy).
pub fn torsion(u: &PeriodicField) -> Result<(PeriodicField, Torsion)> {
    let len = padded_len(u.grid());
    let uu = u.vector_samples_on(len);
    let us = u.differentiate(1, 0.0).vector_samples_on(len);
    let uss = u.differentiate(2, 0.0).vector_samples_on(len);
    let k2: Vec<f64> = us.iter().map(|&x| vec3::dot(x, x)).collect();
    check_nondegenerate(&k2)?;
    let theta: Vec<f64> = (0..len)
        .map(|j| vec3::dot(uu[j], vec3::cross(us[j], uss[j])) / k2[j])
        .collect();
    let field = PeriodicField::from_padded_real(u.grid(), &theta)?;
    let monodromy = mean_torsion(u, len, theta.iter().sum::<f64>() / len as f64);
    Ok((field, Torsion { monodromy }))
}

/// Trapezoid mean of `θ`, refined by doubling: `u` is band-limited, so `θ`
/// can be sampled exactly on any grid, but it is sharply peaked where `κ` is
/// small and the padded grid alone may not resolve it.
fn mean_torsion(u: &PeriodicField, len: usize, coarse: f64) -> f64 {
    let d1 = u.differentiate(1, 0.0);
    let d2 = u.differentiate(2, 0.0);
    let (mut len, mut mean) = (len, coarse);
    while len < 64 * u.grid() {
        len *= 2;
        let (uu, us, uss) = (u.vector_samples_on(len), d1.vector_samples_on(len), d2.vector_samples_on(len));
        let next = (0..len)
            .map(|j| vec3::dot(uu[j], vec3::cross(us[j], uss[j])) / vec3::dot(us[j], us[j]))
            .sum::<f64>()
            / len as f64;
        let change = (next - mean).abs();
        mean = next;
        if change < 1e-13 {
            break;
        }
    }
    mean
}

pub fn frenet_frame(u: &PeriodicField) -> Result<FrenetData> {
    let len = padded_len(u.grid());
    let grid = u.grid();
    let uu = u.vector_samples_on(len);
    let us = u.differentiate(1, 0.0).vector_samples_on(len);
    let k2: Vec<f64> = us.iter().map(|&x| vec3::dot(x, x)).collect();
    check_nondegenerate(&k2)?;
    let normal: Vec<Vec3> = us.iter().map(|&x| vec3::normalize(x)).collect();
    let binormal: Vec<Vec3> = uu.iter().zip(&normal).map(|(&a, &b)| vec3::cross(a, b)).collect();
    let kappa: Vec<f64> = k2.iter().map(|x| x.sqrt()).collect();
    let (theta, _) = torsion(u)?;
    Ok(FrenetData {
        kappa: PeriodicField::from_padded_real(grid, &kappa)?,
        theta,
        normal: PeriodicField::from_padded_vector(grid, &normal)?,
        binormal: PeriodicField::from_padded_vector(grid, &binormal)?,
    })
}

/// Sup over the padded grid of `|∂s u − κ n|` and
/// `|∂s(n + ib) + κ u + iθ(n + ib)|`.
pub fn frenet_residual(u: &PeriodicField, frame: &FrenetData) -> f64 {
    let len = padded_len(u.grid());
    let uu = u.vector_samples_on(len);
    let us = u.differentiate(1, 0.0).vector_samples_on(len);
    let n = frame.normal.vector_samples_on(len);
    let b = frame.binormal.vector_samples_on(len);
    let ns = frame.normal.differentiate(1, 0.0).vector_samples_on(len);
    let bs = frame.binormal.differentiate(1, 0.0).vector_samples_on(len);
    let kappa = frame.kappa.real_samples_on(len);
    let theta = frame.theta.real_samples_on(len);
    let mut worst: f64 = 0.0;
    for j in 0..len {
        let r0 = vec3::sub(us[j], vec3::scale(n[j], kappa[j]));
        // real part: n' + κu − θb ; imaginary part: b' + θn
        let re = vec3::sub(vec3::axpy(kappa[j], uu[j], ns[j]), vec3::scale(b[j], theta[j]));
        let im = vec3::axpy(theta[j], n[j], bs[j]);
        worst = worst
            .max(vec3::norm(r0))
            .max((vec3::dot(re, re) + vec3::dot(im, im)).sqrt());
    }
    worst
}

/// Kinetic, potential and total energy, all with the `ds/2π` measure.
pub fn energies(state: &CurveState) -> Result<Energies> {
    let mean_v = state.v.mean_vector();
    let defect = vec3::norm(mean_v);
    if defect > CLOSED_LOOP_TOL {
        return Err(ElasticaError::OpenLoop { defect });
    }
    // Parseval: V = ½ Σ n² |û(n)|²
    let potential = 0.5 * state.u.differentiate(1, 0.0).sobolev_norm(zero_index()).powi(2);
    let mut w = state.v.antiderivative();
    let g = w.grid();
    for c in 0..3 {
        w.modes_mut()[c * g] = Complex64::new(state.momentum[c], 0.0);
    }
    let kinetic = 0.5 * w.sobolev_norm(zero_index()).powi(2);
    Ok(Energies {
        kinetic,
        potential,
        total: kinetic + potential,
    })
}

fn zero_index() -> crate::spectral::SobolevIndex {
    crate::spectral::SobolevIndex::new(0.0).expect("zero is a valid index")
}

/// `3|∂s²u|² + 4 ∂s u·∂s³u + u·∂s⁴u`, which vanishes when `|u| ≡ 1`.
/// Returns the projected field and the sup over the padded grid.
pub fn bianchi_residual(u: &PeriodicField) -> Result<(PeriodicField, f64)> {
    let len = padded_len(u.grid());
    let d: Vec<Vec<Vec3>> = (0..=4)
        .map(|k| u.differentiate(k, 0.0).vector_samples_on(len))
        .collect();
    let res: Vec<f64> = (0..len)
        .map(|j| {
            3.0 * vec3::dot(d[2][j], d[2][j]) + 4.0 * vec3::dot(d[1][j], d[3][j]) + vec3::dot(d[0][j], d[4][j])
        })
        .collect();
    let sup = res.iter().map(|x| x.abs()).fold(0.0, f64::max);
    Ok((PeriodicField::from_padded_real(u.grid(), &res)?, sup))
}

/// `x(s) = x0 + ∫_0^s u`, evaluated at the grid points.
pub fn reconstruct_position(u: &PeriodicField, x0: Vec3) -> Position {
    let grid = u.grid();
    let closure_defect = u.mean_vector();
    let anti = u.antiderivative();
    let anti_s = anti.vector_samples();
    let anti_0 = anti_s[0];
    let samples = crate::spectral::grid_points(grid)
        .iter()
        .zip(&anti_s)
        .map(|(&s, &a)| vec3::add(vec3::add(x0, vec3::sub(a, anti_0)), vec3::scale(closure_defect, s)))
        .collect();
    Position {
        samples,
        closure_defect,
    }
}

pub fn check_compatibility(u0: &PeriodicField, u1: &PeriodicField) -> CompatibilityReport {
    let len = padded_len(u0.grid());
    let a = u0.vector_samples_on(len);
    let b = u1.vector_samples_on(len);
    let mut report = CompatibilityReport {
        unit_defect: 0.0,
        orthogonality_defect: 0.0,
    };
    for (x, y) in a.iter().zip(&b) {
        report.unit_defect = report.unit_defect.max((vec3::norm(*x) - 1.0).abs());
        report.orthogonality_defect = report.orthogonality_defect.max(vec3::dot(*x, *y).abs());
    }
    report
}
