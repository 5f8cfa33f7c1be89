//! Hasimoto variables: a parallel-transported complex normal frame and the
//! complex fields `(P, Q)` it induces, together with the monodromy `β`.
//!
//! With `ṽ = e₁ + i e₂` transported along the loop, `ṽ(2π) = e^{2πiβ} ṽ(0)`.
//! The periodic frame `v = e^{−isβ} ṽ` obeys
//!
//! ```text
//! ∂s u = Re(Q̄ v),   ∂s v = −Q u − iβ v,
//! ```
//!
//! and `P = v·u₁`, `Q = v·∂s u` (bilinear dot products).
//!
//! Both transport ODEs are rotations of an orthonormal frame. They are
//! integrated with a fourth-order Magnus scheme on a grid `K` times finer
//! than the spectral grid, with coefficients obtained by trigonometric
//! interpolation.

use num_complex::Complex64;

use crate::error::{ElasticaError, Result};
use crate::geometry::KAPPA_MIN;
use crate::spectral::{grid_points, PeriodicField};
use crate::vec3::{self, Vec3};

/// Default integration steps per spectral grid cell.
pub const TRANSPORT_SUBSTEPS: usize = 16;

/// Largest frame periodicity defect accepted by [`inverse_transform`].
pub const PERIODICITY_TOL: f64 = 1e-6;

const SEED_TOL: f64 = 1e-10;

/// An orthonormal triple `(u, e₁, e₂)` at a single point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triad {
    pub u: Vec3,
    pub e1: Vec3,
    pub e2: Vec3,
}

impl Triad {
    /// Frame at `s = 0`: `e₁` along the normal when the curvature there is
    /// resolvable, otherwise along the projected first basis vector.
    pub fn canonical(u0: &PeriodicField) -> Triad {
        let u = vec3::normalize(sample_at_zero(u0));
        let us = sample_at_zero(&u0.differentiate(1, 0.0));
        let normal = vec3::axpy(-vec3::dot(us, u), u, us);
        let e1 = if vec3::norm(normal) > KAPPA_MIN {
            vec3::normalize(normal)
        } else {
            let mut best = [0.0; 3];
            for axis in 0..3 {
                let mut b = [0.0; 3];
                b[axis] = 1.0;
                let p = vec3::axpy(-vec3::dot(b, u), u, b);
                if vec3::norm(p) > 0.5 {
                    best = vec3::normalize(p);
                    break;
                }
            }
            best
        };
        Triad {
            u,
            e1,
            e2: vec3::cross(u, e1),
        }
    }

    /// Worst deviation from a positively oriented orthonormal triple.
    pub fn defect(&self) -> f64 {
        let Triad { u, e1, e2 } = *self;
        let mut d: f64 = 0.0;
        for x in [u, e1, e2] {
            d = d.max((vec3::dot(x, x) - 1.0).abs());
        }
        for (a, b) in [(u, e1), (u, e2), (e1, e2)] {
            d = d.max(vec3::dot(a, b).abs());
        }
        d.max((vec3::dot(u, vec3::cross(e1, e2)) - 1.0).abs())
    }

    /// Gram–Schmidt, keeping the direction of `u` and the plane of `(u, e₁)`.
    pub fn orthonormalized(&self) -> Triad {
        let u = vec3::normalize(self.u);
        let e1 = vec3::normalize(vec3::axpy(-vec3::dot(self.e1, u), u, self.e1));
        Triad {
            u,
            e1,
            e2: vec3::cross(u, e1),
        }
    }

    /// `ṽ = e₁ + i e₂`.
    pub fn complex_normal(&self) -> [Complex64; 3] {
        std::array::from_fn(|k| Complex64::new(self.e1[k], self.e2[k]))
    }

    /// Right multiplication by `exp(A)` for the skew matrix
    /// `A = [[0,−a,−b],[a,0,−c],[b,c,0]]` acting on columns `(u, e₁, e₂)`.
    pub fn rotate(&self, a: f64, b: f64, c: f64) -> Triad {
        // Rodrigues: exp(A) = I + (sin θ/θ) A + ((1 − cos θ)/θ²) A²
        let theta = (a * a + b * b + c * c).sqrt();
        let (s1, s2) = if theta < 1e-8 {
            (1.0 - theta * theta / 6.0, 0.5 - theta * theta / 24.0)
        } else {
            (theta.sin() / theta, (1.0 - theta.cos()) / (theta * theta))
        };
        let am = [[0.0, -a, -b], [a, 0.0, -c], [b, c, 0.0]];
        let mut e = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let sq: f64 = (0..3).map(|k| am[i][k] * am[k][j]).sum();
                e[i][j] = if i == j { 1.0 } else { 0.0 } + s1 * am[i][j] + s2 * sq;
            }
        }
        let cols = [self.u, self.e1, self.e2];
        let col = |j: usize| -> Vec3 {
            let mut out = [0.0; 3];
            for (i, c) in cols.iter().enumerate() {
                out = vec3::axpy(e[i][j], *c, out);
            }
            out
        };
        Triad {
            u: col(0),
            e1: col(1),
            e2: col(2),
        }
    }

    pub fn distance(&self, other: &Triad) -> f64 {
        vec3::max_distance(&[self.u, self.e1, self.e2], &[other.u, other.e1, other.e2])
    }
}

fn sample_at_zero(f: &PeriodicField) -> Vec3 {
    let mut out = [0.0; 3];
    for (c, o) in out.iter_mut().enumerate() {
        *o = f.component_modes(c).iter().map(|m| m.re).sum();
    }
    out
}

/// A frame sampled at the spectral grid points.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameField {
    pub u: Vec<Vec3>,
    pub e1: Vec<Vec3>,
    pub e2: Vec<Vec3>,
}

impl FrameField {
    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn triad(&self, j: usize) -> Triad {
        Triad {
            u: self.u[j],
            e1: self.e1[j],
            e2: self.e2[j],
        }
    }

    /// `ṽ = e₁ + i e₂` at every sample.
    pub fn complex_normal(&self) -> Vec<[Complex64; 3]> {
        (0..self.len()).map(|j| self.triad(j).complex_normal()).collect()
    }

    /// Worst orthonormality/orientation defect over all samples.
    pub fn defect(&self) -> f64 {
        (0..self.len()).map(|j| self.triad(j).defect()).fold(0.0, f64::max)
    }
}

/// Output of [`parallel_frame`].
#[derive(Debug, Clone, PartialEq)]
pub struct ParallelFrame {
    /// `ṽ` (not periodic) sampled at the grid points.
    pub frame: FrameField,
    /// Monodromy in `[−1/2, 1/2)`.
    pub beta: f64,
    /// Orthonormality drift of the transported frame after one period.
    pub drift: f64,
    fine_us: Vec<Vec3>,
    fine_frame: Vec<Triad>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HasimotoState {
    pub p: PeriodicField,
    pub q: PeriodicField,
    pub beta: f64,
}

impl HasimotoState {
    pub fn new(p: PeriodicField, q: PeriodicField, beta: f64) -> Result<Self> {
        for f in [&p, &q] {
            if f.components() != 1 {
                return Err(ElasticaError::ComponentMismatch {
                    left: 1,
                    right: f.components(),
                });
            }
        }
        if p.grid() != q.grid() {
            return Err(ElasticaError::GridMismatch {
                left: p.grid(),
                right: q.grid(),
            });
        }
        if !beta.is_finite() {
            return Err(ElasticaError::InvalidParameter(format!("beta = {beta}")));
        }
        Ok(Self { p, q, beta })
    }

    pub fn grid(&self) -> usize {
        self.q.grid()
    }

    /// `|Q|` on the grid, i.e. the curvature of the underlying curve.
    pub fn kappa(&self) -> Result<PeriodicField> {
        let len = crate::spectral::padded_len(self.grid());
        let k: Vec<f64> = self.q.samples_on(len).iter().map(|z| z.norm()).collect();
        PeriodicField::from_padded_real(self.grid(), &k)
    }

    /// Torsion `θ = Im(∂s Q / Q) + β`.
    pub fn torsion(&self) -> Result<PeriodicField> {
        let len = crate::spectral::padded_len(self.grid());
        let q = self.q.samples_on(len);
        let dq = self.q.differentiate(1, 0.0).samples_on(len);
        let mut out = Vec::with_capacity(len);
        for (a, b) in q.iter().zip(&dq) {
            if a.norm() < KAPPA_MIN {
                return Err(ElasticaError::DegenerateCurvature {
                    min_kappa: a.norm(),
                    threshold: KAPPA_MIN,
                });
            }
            out.push((b / a).im + self.beta);
        }
        PeriodicField::from_padded_real(self.grid(), &out)
    }
}

/// Maps `β` into `[−1/2, 1/2)` and returns the integer removed.
pub fn branch(beta: f64) -> (f64, i64) {
    let k = (beta + 0.5).floor();
    (beta - k, k as i64)
}

fn check_substeps(substeps: usize) -> Result<()> {
    if !(2..=1024).contains(&substeps) || !substeps.is_power_of_two() {
        return Err(ElasticaError::InvalidParameter(format!(
            "transport substeps must be a power of two in [2, 1024], got {substeps}"
        )));
    }
    Ok(())
}

/// Transports the seed along `u0` by `∂s ṽ = −(ṽ·∂s u) u`.
pub fn parallel_frame(u0: &PeriodicField, seed: &Triad) -> Result<ParallelFrame> {
    parallel_frame_with(u0, seed, TRANSPORT_SUBSTEPS)
}

/// Samples of a 3-vector field at `s_i + offset`, `s_i = 2πi/m`.
fn vectors_at(f: &PeriodicField, m: usize, offset: f64) -> Vec<Vec3> {
    f.translate(offset).vector_samples_on(m)
}

/// Rotates `x` by the rotation vector `phi`.
fn rotate_vector(phi: Vec3, x: Vec3) -> Vec3 {
    let theta = vec3::norm(phi);
    let (s1, s2) = if theta < 1e-8 {
        (1.0 - theta * theta / 6.0, 0.5 - theta * theta / 24.0)
    } else {
        (theta.sin() / theta, (1.0 - theta.cos()) / (theta * theta))
    };
    let px = vec3::cross(phi, x);
    vec3::axpy(s2, vec3::cross(phi, px), vec3::axpy(s1, px, x))
}

// Gauss–Legendre nodes on [0, 1] and the fourth-order Magnus commutator weight.
const GAUSS_1: f64 = 0.5 - 0.288_675_134_594_812_9;
const GAUSS_2: f64 = 0.5 + 0.288_675_134_594_812_9;
const MAGNUS_C: f64 = 0.144_337_567_297_406_45; // √3/12

/// The transported frame satisfies `e' = ω × e` with `ω = u × ∂s u`; each
/// step applies the exact rotation of the two-point fourth-order Magnus
/// expansion, so orthonormality is preserved to round-off.
pub fn parallel_frame_with(u0: &PeriodicField, seed: &Triad, substeps: usize) -> Result<ParallelFrame> {
    check_substeps(substeps)?;
    let grid = u0.grid();
    let u_start = sample_at_zero(u0);
    let defect = seed.defect().max(vec3::norm(vec3::sub(seed.u, u_start)));
    if defect > SEED_TOL {
        return Err(ElasticaError::BadSeed { defect });
    }
    let m = substeps * grid;
    let h = 2.0 * std::f64::consts::PI / m as f64;
    let du = u0.differentiate(1, 0.0);
    let darboux = |offset: f64| -> Vec<Vec3> {
        let a = vectors_at(u0, m, offset);
        let b = vectors_at(&du, m, offset);
        a.iter().zip(&b).map(|(&x, &y)| vec3::cross(vec3::normalize(x), y)).collect()
    };
    let w1 = darboux(GAUSS_1 * h);
    let w2 = darboux(GAUSS_2 * h);
    let uu = u0.vector_samples_on(m);
    let us = du.vector_samples_on(m);

    let mut e1 = seed.e1;
    let mut e2 = seed.e2;
    let mut fine = Vec::with_capacity(m);
    for i in 0..m {
        fine.push(Triad { u: uu[i], e1, e2 }.orthonormalized());
        let phi = vec3::axpy(
            -MAGNUS_C * h * h,
            vec3::cross(w1[i], w2[i]),
            vec3::scale(vec3::add(w1[i], w2[i]), 0.5 * h),
        );
        e1 = rotate_vector(phi, e1);
        e2 = rotate_vector(phi, e2);
    }
    let end = Triad { u: uu[0], e1, e2 };
    let drift = end.defect();

    let v0 = seed.complex_normal();
    let v1 = end.complex_normal();
    let overlap: Complex64 = (0..3).map(|k| v1[k] * v0[k].conj()).sum();
    let (beta, _) = branch(overlap.arg() / (2.0 * std::f64::consts::PI));

    let pick = |f: &dyn Fn(&Triad) -> Vec3| -> Vec<Vec3> { (0..grid).map(|j| f(&fine[j * substeps])).collect() };
    let frame = FrameField {
        u: pick(&|t| t.u),
        e1: pick(&|t| t.e1),
        e2: pick(&|t| t.e2),
    };
    Ok(ParallelFrame {
        frame,
        beta,
        drift,
        fine_us: us,
        fine_frame: fine,
    })
}

/// Result of a forward transform: the state and the frame used at `s = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Forward {
    pub state: HasimotoState,
    pub seed: Triad,
    pub drift: f64,
}

/// `(u₀, u₁) ↦ (P₀, Q₀, β₀)` with the canonical seed.
pub fn forward_transform(u0: &PeriodicField, u1: &PeriodicField) -> Result<Forward> {
    forward_transform_with(u0, u1, &Triad::canonical(u0), TRANSPORT_SUBSTEPS)
}

pub fn forward_transform_with(
    u0: &PeriodicField,
    u1: &PeriodicField,
    seed: &Triad,
    substeps: usize,
) -> Result<Forward> {
    if u0.grid() != u1.grid() {
        return Err(ElasticaError::GridMismatch {
            left: u0.grid(),
            right: u1.grid(),
        });
    }
    let pf = parallel_frame_with(u0, seed, substeps)?;
    let grid = u0.grid();
    let m = pf.fine_frame.len();
    let u1s = u1.vector_samples_on(m);
    let beta = pf.beta;
    let mut p = Vec::with_capacity(m);
    let mut q = Vec::with_capacity(m);
    for (i, (s, t)) in grid_points(m).into_iter().zip(&pf.fine_frame).enumerate() {
        // periodic frame v = e^{−isβ} ṽ
        let phase = Complex64::from_polar(1.0, -s * beta);
        let v = t.complex_normal();
        let dot = |w: Vec3| -> Complex64 { (0..3).map(|k| v[k] * w[k]).sum::<Complex64>() * phase };
        p.push(dot(u1s[i]));
        q.push(dot(pf.fine_us[i]));
    }
    let state = HasimotoState::new(
        PeriodicField::from_padded_samples(grid, &p)?,
        PeriodicField::from_padded_samples(grid, &q)?,
        beta,
    )?;
    Ok(Forward {
        state,
        seed: *seed,
        drift: pf.drift,
    })
}

/// Output of [`inverse_transform`].
#[derive(Debug, Clone, PartialEq)]
pub struct Inverse {
    pub u0: PeriodicField,
    pub u1: PeriodicField,
    /// Periodic frame `(u, Re v, Im v)` at the grid points.
    pub frame: FrameField,
    /// `max |R(2π) − R(0)|` over the three columns.
    pub periodicity_defect: f64,
}

/// Integrates `∂s u = Re(Q̄ v)`, `∂s v = −Q u − iβ v` from `frame0` and
/// returns `u₀` and `u₁ = Re(P̄ v)`. Fails when the frame does not close.
pub fn inverse_transform(state: &HasimotoState, frame0: &Triad) -> Result<Inverse> {
    let out = integrate_inverse(state, frame0, TRANSPORT_SUBSTEPS)?;
    if out.periodicity_defect > PERIODICITY_TOL {
        return Err(ElasticaError::Incompatible {
            defect: out.periodicity_defect,
        });
    }
    Ok(out)
}

/// Like [`inverse_transform`] but reports the defect instead of failing.
pub fn integrate_inverse(state: &HasimotoState, frame0: &Triad, substeps: usize) -> Result<Inverse> {
    check_substeps(substeps)?;
    let defect = frame0.defect();
    if defect > SEED_TOL {
        return Err(ElasticaError::BadSeed { defect });
    }
    let grid = state.grid();
    let m = substeps * grid;
    let h = 2.0 * std::f64::consts::PI / m as f64;
    let q1 = state.q.translate(GAUSS_1 * h).samples_on(m);
    let q2 = state.q.translate(GAUSS_2 * h).samples_on(m);
    let beta = state.beta;
    // generator in rotation-vector form: A ↔ (β, −Im Q, Re Q)
    let gen = |q: Complex64| -> Vec3 { [beta, -q.im, q.re] };

    let mut r = *frame0;
    let mut fine = Vec::with_capacity(m);
    for i in 0..m {
        fine.push(r.orthonormalized());
        let (a1, a2) = (gen(q1[i]), gen(q2[i]));
        // R ← R exp(h/2 (A₁+A₂) + (√3/12) h² [A₁, A₂])
        let phi = vec3::axpy(
            MAGNUS_C * h * h,
            vec3::cross(a1, a2),
            vec3::scale(vec3::add(a1, a2), 0.5 * h),
        );
        r = r.rotate(phi[2], -phi[1], phi[0]);
    }
    let periodicity_defect = r.distance(frame0);

    let ps = state.p.samples_on(m);
    let u_fine: Vec<Vec3> = fine.iter().map(|t| t.u).collect();
    let u1_fine: Vec<Vec3> = fine
        .iter()
        .zip(&ps)
        .map(|(t, p)| vec3::add(vec3::scale(t.e1, p.re), vec3::scale(t.e2, p.im)))
        .collect();
    let pick = |f: &dyn Fn(&Triad) -> Vec3| -> Vec<Vec3> { (0..grid).map(|j| f(&fine[j * substeps])).collect() };
    Ok(Inverse {
        u0: PeriodicField::from_padded_vector(grid, &u_fine)?,
        u1: PeriodicField::from_padded_vector(grid, &u1_fine)?,
        frame: FrameField {
            u: pick(&|t| t.u),
            e1: pick(&|t| t.e1),
            e2: pick(&|t| t.e2),
        },
        periodicity_defect,
    })
}

/// `Im(a b̄)` as a real field.
fn im_product_conj(a: &PeriodicField, b: &PeriodicField) -> Result<PeriodicField> {
    let w = a.multiply(&b.conj())?;
    // Im w = (w − w̄)/(2i)
    Ok((&w - &w.conj()).scale(Complex64::new(0.0, -0.5)))
}

/// `α` with `∂s α = Im(P Q̄) − ∮ Im(P Q̄)` and zero mean.
pub fn compute_alpha(p: &PeriodicField, q: &PeriodicField) -> Result<PeriodicField> {
    Ok(im_product_conj(p, q)?.antiderivative())
}

/// `B = ∮ Im(Q̄ P) ds/2π`, computed exactly by Parseval.
pub fn monodromy_drift(p: &PeriodicField, q: &PeriodicField) -> f64 {
    p.modes()
        .iter()
        .zip(q.modes())
        .map(|(a, b)| (b.conj() * a).im)
        .sum()
}

/// `P ↦ e^{i(s₀+ks)} P`, `Q ↦ e^{i(s₀+ks)} Q`, `β ↦ β − k`.
///
/// Mode content shifted past the retained band is dropped.
pub fn gauge_shift(state: &HasimotoState, k: i64, s0: f64) -> HasimotoState {
    let phase = Complex64::from_polar(1.0, s0);
    let shift = |f: &PeriodicField| -> PeriodicField {
        let grid = f.grid();
        let half = (grid / 2) as i64;
        let mut out = PeriodicField::zeros(grid, 1).expect("grid already validated");
        for n in (-half + 1)..half {
            let target = n + k;
            if target.abs() < half {
                out.set_mode(target, f.mode(n) * phase);
            }
        }
        out
    };
    HasimotoState {
        p: shift(&state.p),
        q: shift(&state.q),
        beta: state.beta - k as f64,
    }
}
