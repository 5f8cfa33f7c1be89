//! Initial data: circles, latitudes, perturbed circles and random closed
//! curves, each returned as a compatible `CurveState`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ElasticaError, Result};
use crate::geometry::{check_compatibility, CurveState};
use crate::spectral::{check_grid, grid_points, PeriodicField};
use crate::vec3::{self, Vec3};

/// Largest compatibility defect accepted for generated data.
pub const COMPATIBILITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScenarioSpec {
    Circle,
    /// Latitude circle at polar angle `psi`, moving in `psi` at `rate`.
    Latitude { psi: f64, rate: f64 },
    /// Circle with an `eps·cos(mode·s)` perturbation travelling at `speed`.
    PerturbedCircle {
        eps: f64,
        mode: usize,
        planar: bool,
        speed: f64,
    },
    /// Random smooth closed curve with `modes`-fold symmetry; see
    /// [`random_closed_curve`].
    Random {
        seed: u64,
        amplitude: f64,
        modes: usize,
        decay: f64,
        planar: bool,
    },
}

impl ScenarioSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ScenarioSpec::Circle => "circle",
            ScenarioSpec::Latitude { .. } => "latitude",
            ScenarioSpec::PerturbedCircle { planar: true, .. } => "perturbed-planar",
            ScenarioSpec::PerturbedCircle { planar: false, .. } => "perturbed-3d",
            ScenarioSpec::Random { .. } => "random",
        }
    }

    /// The standard planar test problem: `ε = 0.01`, `m = 3`.
    pub fn standard_planar() -> Self {
        ScenarioSpec::PerturbedCircle {
            eps: 0.01,
            mode: 3,
            planar: true,
            speed: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub spec: ScenarioSpec,
    pub grid: usize,
    pub initial: CurveState,
}

impl Scenario {
    pub fn build(spec: ScenarioSpec, grid: usize) -> Result<Self> {
        let initial = match spec {
            ScenarioSpec::Circle => make_circle(grid)?,
            ScenarioSpec::Latitude { psi, rate } => make_latitude_moving(grid, psi, rate)?,
            ScenarioSpec::PerturbedCircle {
                eps,
                mode,
                planar,
                speed,
            } => make_perturbed_circle(grid, eps, mode, planar, speed)?,
            ScenarioSpec::Random {
                seed,
                amplitude,
                modes,
                decay,
                planar,
            } => {
                let curve = random_closed_curve(grid, seed, amplitude, modes, decay, planar)?;
                let zero = PeriodicField::zeros(grid, 3)?;
                CurveState::new(curve, zero, [0.0; 3])?
            }
        };
        Ok(Scenario { spec, grid, initial })
    }

    pub fn name(&self) -> &'static str {
        self.spec.name()
    }
}

fn finish(u: Vec<Vec3>, v: Vec<Vec3>) -> Result<CurveState> {
    let u = PeriodicField::from_vector_samples(&u)?;
    let v = PeriodicField::from_vector_samples(&v)?;
    let report = check_compatibility(&u, &v);
    let defect = report.unit_defect.max(report.orthogonality_defect);
    if defect > COMPATIBILITY_TOL {
        return Err(ElasticaError::InvalidParameter(format!(
            "generated data is under-resolved on this grid: compatibility defect {defect:e}"
        )));
    }
    CurveState::new(u, v, [0.0; 3])
}

/// `u = (−sin s, cos s, 0)`, at rest.
pub fn make_circle(grid: usize) -> Result<CurveState> {
    make_perturbed_circle(grid, 0.0, 2, true, 0.0)
}

/// `u = (sin ψ cos s, sin ψ sin s, cos ψ)`, at rest.
pub fn make_latitude(grid: usize, psi: f64) -> Result<CurveState> {
    make_latitude_moving(grid, psi, 0.0)
}

/// Latitude with `∂t u = rate·∂ψ u`. The mean of `v` is `(0, 0, −rate·sin ψ)`,
/// so the loop does not close up in time unless `rate = 0`.
pub fn make_latitude_moving(grid: usize, psi: f64, rate: f64) -> Result<CurveState> {
    check_grid(grid)?;
    if !(psi > 0.0 && psi < std::f64::consts::PI) {
        return Err(ElasticaError::InvalidParameter(format!(
            "latitude angle must lie in (0, π), got {psi}"
        )));
    }
    if !rate.is_finite() {
        return Err(ElasticaError::InvalidParameter(format!("rate = {rate}")));
    }
    let (sp, cp) = psi.sin_cos();
    let pts = grid_points(grid);
    let u = pts.iter().map(|s| [sp * s.cos(), sp * s.sin(), cp]).collect();
    let v = pts
        .iter()
        .map(|s| vec3::scale([cp * s.cos(), cp * s.sin(), -sp], rate))
        .collect();
    finish(u, v)
}

/// Rate for which the closure defect `∮ u ds/2π = (0, 0, cos ψ)` grows by
/// `(0, 0, cos ψ)` per unit time.
pub fn doubling_rate(psi: f64) -> f64 {
    -1.0 / psi.tan()
}

/// Circle tangent perturbed by `ε cos(m(s − ct))`: in-plane through the
/// tangent angle when `planar`, otherwise out of plane and renormalized.
/// `v` is the time derivative of that family at `t = 0`.
pub fn make_perturbed_circle(grid: usize, eps: f64, mode: usize, planar: bool, speed: f64) -> Result<CurveState> {
    check_grid(grid)?;
    if !(0.0..=0.1).contains(&eps) {
        return Err(ElasticaError::InvalidParameter(format!("eps must lie in [0, 0.1], got {eps}")));
    }
    if mode < 2 || mode > grid / 4 {
        return Err(ElasticaError::InvalidParameter(format!(
            "mode must lie in [2, N/4] = [2, {}], got {mode}",
            grid / 4
        )));
    }
    if !speed.is_finite() {
        return Err(ElasticaError::InvalidParameter(format!("speed = {speed}")));
    }
    let m = mode as f64;
    let pts = grid_points(grid);
    let (u, v) = if planar {
        pts.iter()
            .map(|&s| {
                let phi = s + eps * (m * s).cos();
                let dphi = eps * m * speed * (m * s).sin();
                ([-phi.sin(), phi.cos(), 0.0], [-dphi * phi.cos(), -dphi * phi.sin(), 0.0])
            })
            .unzip()
    } else {
        pts.iter()
            .map(|&s| {
                let w = [-s.sin(), s.cos(), eps * (m * s).cos()];
                let u = vec3::normalize(w);
                let dw = [0.0, 0.0, eps * m * speed * (m * s).sin()];
                let v = vec3::scale(vec3::axpy(-vec3::dot(dw, u), u, dw), 1.0 / vec3::norm(w));
                (u, v)
            })
            .unzip()
    };
    finish(u, v)
}

/// Tangent of a random smooth closed curve with `symmetry`-fold symmetry.
///
/// In spherical angles `u = (sin ϑ cos φ, sin ϑ sin φ, cos ϑ)` with
/// `φ = s + f(s)` and `ϑ = π/2 + g(s)`, where `f` holds random modes `m`, `2m`
/// (the second damped by `e^{−decay}`) and `g` holds mode `m` only. Then `|u| ≡ 1`
/// exactly, `s` is arclength, and the symmetry forces `∮ u = 0`: `u₁ + iu₂` is
/// `e^{is}` times a function of period `2π/m`, and `u₃` is antiperiodic under
/// `s ↦ s + π/m`.
pub fn random_closed_curve(
    grid: usize,
    seed: u64,
    amplitude: f64,
    symmetry: usize,
    decay: f64,
    planar: bool,
) -> Result<PeriodicField> {
    check_grid(grid)?;
    if !(amplitude >= 0.0 && decay >= 0.0) || symmetry < 2 {
        return Err(ElasticaError::InvalidParameter(format!(
            "random curve needs amplitude >= 0, decay >= 0, symmetry >= 2 (got {amplitude}, {decay}, {symmetry})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeff = |scale: f64| -> f64 { scale * rng.random_range(-1.0..1.0) };
    let f = [
        coeff(amplitude),
        coeff(amplitude),
        coeff(amplitude * (-decay).exp()),
        coeff(amplitude * (-decay).exp()),
    ];
    let g = if planar {
        [0.0, 0.0]
    } else {
        [coeff(amplitude), coeff(amplitude)]
    };
    let m = symmetry as f64;
    let u: Vec<Vec3> = grid_points(grid)
        .into_iter()
        .map(|s| {
            let (s1, c1) = (m * s).sin_cos();
            let (s2, c2) = (2.0 * m * s).sin_cos();
            let phi = s + f[0] * c1 + f[1] * s1 + f[2] * c2 + f[3] * s2;
            // ϑ − π/2
            let lat = g[0] * c1 + g[1] * s1;
            [lat.cos() * phi.cos(), lat.cos() * phi.sin(), -lat.sin()]
        })
        .collect();
    let field = PeriodicField::from_vector_samples(&u)?;
    let defect = check_compatibility(&field, &PeriodicField::zeros(grid, 3)?).unit_defect;
    if defect > COMPATIBILITY_TOL {
        return Err(ElasticaError::InvalidParameter(format!(
            "random curve is under-resolved on this grid: unit defect {defect:e}"
        )));
    }
    Ok(field)
}

/// Grid on which random ensembles are generated and checked.
pub const ENSEMBLE_GRID: usize = 128;

/// Deterministic ensemble member: symmetry and amplitude drawn from `seed`,
/// within the range that [`ENSEMBLE_GRID`] resolves.
pub fn ensemble_member(seed: u64, planar: bool) -> ScenarioSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x2545_f491_4f6c_dd1d));
    let (symmetry, max_amp) = if rng.random_bool(0.5) { (2, 0.8) } else { (3, 0.6) };
    ScenarioSpec::Random {
        seed,
        amplitude: rng.random_range(0.05..max_amp),
        modes: symmetry,
        decay: 1.0,
        planar,
    }
}

/// A random smooth `u₁ ⊥ u₀` of size about `amplitude`; for planar `u₀` it
/// stays in the plane.
pub fn random_velocity(u0: &PeriodicField, seed: u64, amplitude: f64, planar: bool) -> Result<PeriodicField> {
    let grid = u0.grid();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut terms = Vec::new();
    for k in 0..=3 {
        let mut c = [0.0; 6];
        for x in c.iter_mut() {
            *x = amplitude * rng.random_range(-1.0..1.0) / (1.0 + k as f64);
        }
        terms.push((k as f64, c));
    }
    let uu = u0.vector_samples();
    let out: Vec<Vec3> = grid_points(grid)
        .iter()
        .zip(&uu)
        .map(|(&s, &u)| {
            let mut w = [0.0; 3];
            for &(k, c) in &terms {
                let (sn, cs) = (k * s).sin_cos();
                w = vec3::add(w, [c[0] * cs + c[3] * sn, c[1] * cs + c[4] * sn, c[2] * cs + c[5] * sn]);
            }
            if planar {
                // in-plane normal times a scalar profile
                let n = vec3::cross([0.0, 0.0, 1.0], u);
                vec3::scale(n, w[0])
            } else {
                vec3::axpy(-vec3::dot(w, u), u, w)
            }
        })
        .collect();
    PeriodicField::from_vector_samples(&out)
}
