//! Fourier representation of 2π-periodic fields.
//!
//! Coefficients are stored as means, `f̂(n) = ∮ f(s) e^{-ins} ds/2π`, in FFT
//! order: slot `j` holds wavenumber `j` for `j < N/2` and `j - N` otherwise.
//! Vector fields keep their components back to back (component-major).
//!
//! Nonlinear products are formed pointwise on a 3/2-padded grid and truncated
//! back to the symmetric band `|n| <= N/2 - 1`; the unpaired Nyquist slot is
//! left empty by every product so real fields stay real.

use std::cell::RefCell;
use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{ElasticaError, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

type PlanCache = (FftPlanner<f64>, HashMap<(usize, bool), Arc<dyn Fft<f64>>>);

thread_local! {
    static PLANS: RefCell<PlanCache> =
        RefCell::new((FftPlanner::new(), HashMap::new()));
}

fn plan(len: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    PLANS.with(|cell| {
        let mut guard = cell.borrow_mut();
        let (planner, cache) = &mut *guard;
        cache
            .entry((len, forward))
            .or_insert_with(|| {
                if forward {
                    planner.plan_fft_forward(len)
                } else {
                    planner.plan_fft_inverse(len)
                }
            })
            .clone()
    })
}

/// In-place unnormalized forward DFT: `X_k = Σ x_j e^{-2πijk/M}`.
pub(crate) fn fft_forward(buf: &mut [Complex64]) {
    plan(buf.len(), true).process(buf);
}

/// In-place unnormalized inverse DFT: `x_j = Σ X_k e^{+2πijk/M}`.
pub(crate) fn fft_inverse(buf: &mut [Complex64]) {
    plan(buf.len(), false).process(buf);
}

/// Wavenumber stored in FFT slot `j` of a length-`len` array.
#[inline]
pub fn wavenumber(j: usize, len: usize) -> i64 {
    if j < len / 2 {
        j as i64
    } else {
        j as i64 - len as i64
    }
}

/// FFT slot holding wavenumber `n` in a length-`len` array.
#[inline]
pub fn slot(n: i64, len: usize) -> usize {
    n.rem_euclid(len as i64) as usize
}

/// Equispaced sample positions `s_j = 2πj/len`.
pub fn grid_points(len: usize) -> Vec<f64> {
    (0..len)
        .map(|j| 2.0 * std::f64::consts::PI * j as f64 / len as f64)
        .collect()
}

/// Size of the 3/2-padded grid used for products.
#[inline]
pub fn padded_len(grid: usize) -> usize {
    3 * grid / 2
}

pub fn check_grid(grid: usize) -> Result<()> {
    if grid < 4 || !grid.is_power_of_two() {
        return Err(ElasticaError::NonPowerOfTwo(grid));
    }
    Ok(())
}

/// Sobolev exponent `r` for `H^r` norms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SobolevIndex(f64);

impl SobolevIndex {
    pub fn new(r: f64) -> Result<Self> {
        if !r.is_finite() || r < 0.0 {
            return Err(ElasticaError::InvalidParameter(format!(
                "Sobolev index must be finite and non-negative, got {r}"
            )));
        }
        Ok(Self(r))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// A scalar or 3-vector valued 2π-periodic function held by its Fourier modes.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicField {
    grid: usize,
    components: usize,
    modes: Vec<Complex64>,
}

impl PeriodicField {
    pub fn zeros(grid: usize, components: usize) -> Result<Self> {
        check_grid(grid)?;
        if components != 1 && components != 3 {
            return Err(ElasticaError::InvalidParameter(format!(
                "components must be 1 or 3, got {components}"
            )));
        }
        Ok(Self {
            grid,
            components,
            modes: vec![Complex64::new(0.0, 0.0); grid * components],
        })
    }

    pub fn from_modes(grid: usize, components: usize, modes: Vec<Complex64>) -> Result<Self> {
        let mut out = Self::zeros(grid, components)?;
        if modes.len() != grid * components {
            return Err(ElasticaError::SampleCount {
                expected: grid * components,
                got: modes.len(),
            });
        }
        out.modes = modes;
        Ok(out)
    }

    /// Constant scalar field.
    pub fn constant(grid: usize, value: Complex64) -> Result<Self> {
        let mut out = Self::zeros(grid, 1)?;
        out.modes[0] = value;
        Ok(out)
    }

    /// Exact DFT of `N` equispaced complex samples.
    pub fn transform_to_modes(samples: &[Complex64]) -> Result<Self> {
        let grid = samples.len();
        check_grid(grid)?;
        let mut buf = samples.to_vec();
        fft_forward(&mut buf);
        let scale = 1.0 / grid as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
        Self::from_modes(grid, 1, buf)
    }

    pub fn from_real_samples(samples: &[f64]) -> Result<Self> {
        let buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::transform_to_modes(&buf)
    }

    /// Scalar field from samples of a function at the `N` grid points.
    pub fn from_fn(grid: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        check_grid(grid)?;
        let samples: Vec<Complex64> = grid_points(grid).into_iter().map(f).collect();
        Self::transform_to_modes(&samples)
    }

    pub fn from_real_fn(grid: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_fn(grid, |s| Complex64::new(f(s), 0.0))
    }

    /// 3-vector field from real samples at the `N` grid points.
    pub fn from_vector_samples(samples: &[[f64; 3]]) -> Result<Self> {
        let grid = samples.len();
        check_grid(grid)?;
        let mut modes = Vec::with_capacity(3 * grid);
        for c in 0..3 {
            let comp: Vec<f64> = samples.iter().map(|x| x[c]).collect();
            modes.extend(Self::from_real_samples(&comp)?.modes);
        }
        Self::from_modes(grid, 3, modes)
    }

    pub fn from_vector_fn(grid: usize, f: impl Fn(f64) -> [f64; 3]) -> Result<Self> {
        check_grid(grid)?;
        let samples: Vec<[f64; 3]> = grid_points(grid).into_iter().map(f).collect();
        Self::from_vector_samples(&samples)
    }

    /// Vector field assembled from three scalar fields.
    pub fn from_components(parts: [&PeriodicField; 3]) -> Result<Self> {
        let grid = parts[0].grid;
        let mut modes = Vec::with_capacity(3 * grid);
        for p in parts {
            if p.components != 1 {
                return Err(ElasticaError::ComponentMismatch {
                    left: 1,
                    right: p.components,
                });
            }
            if p.grid != grid {
                return Err(ElasticaError::GridMismatch {
                    left: grid,
                    right: p.grid,
                });
            }
            modes.extend_from_slice(&p.modes);
        }
        Self::from_modes(grid, 3, modes)
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn modes(&self) -> &[Complex64] {
        &self.modes
    }

    pub fn modes_mut(&mut self) -> &mut [Complex64] {
        &mut self.modes
    }

    /// Modes of component `c` in FFT order.
    pub fn component_modes(&self, c: usize) -> &[Complex64] {
        &self.modes[c * self.grid..(c + 1) * self.grid]
    }

    pub fn component(&self, c: usize) -> PeriodicField {
        PeriodicField {
            grid: self.grid,
            components: 1,
            modes: self.component_modes(c).to_vec(),
        }
    }

    /// Coefficient of wavenumber `n` (component 0 for scalars).
    pub fn mode(&self, n: i64) -> Complex64 {
        self.mode_of(0, n)
    }

    pub fn mode_of(&self, c: usize, n: i64) -> Complex64 {
        let half = (self.grid / 2) as i64;
        if n < -half || n >= half {
            return Complex64::new(0.0, 0.0);
        }
        self.modes[c * self.grid + slot(n, self.grid)]
    }

    pub fn set_mode(&mut self, n: i64, value: Complex64) {
        let g = self.grid;
        self.modes[slot(n, g)] = value;
    }

    /// Mean value `∮ f ds/2π` per component.
    pub fn mean(&self) -> Vec<Complex64> {
        (0..self.components)
            .map(|c| self.modes[c * self.grid])
            .collect()
    }

    pub fn mean_vector(&self) -> [f64; 3] {
        let m = self.mean();
        [m[0].re, m[1].re, m[2].re]
    }

    /// Samples of component `c` on an `len`-point grid (`len >= N`) by
    /// zero-padded trigonometric interpolation.
    pub fn component_samples_on(&self, c: usize, len: usize) -> Vec<Complex64> {
        debug_assert!(len >= self.grid);
        let mut buf = vec![Complex64::new(0.0, 0.0); len];
        for (j, &m) in self.component_modes(c).iter().enumerate() {
            buf[slot(wavenumber(j, self.grid), len)] = m;
        }
        fft_inverse(&mut buf);
        buf
    }

    /// Samples of a scalar field on the native grid.
    pub fn samples(&self) -> Vec<Complex64> {
        self.component_samples_on(0, self.grid)
    }

    pub fn samples_on(&self, len: usize) -> Vec<Complex64> {
        self.component_samples_on(0, len)
    }

    pub fn real_samples_on(&self, len: usize) -> Vec<f64> {
        self.samples_on(len).into_iter().map(|c| c.re).collect()
    }

    /// Real parts of a vector field on an `len`-point grid.
    pub fn vector_samples_on(&self, len: usize) -> Vec<[f64; 3]> {
        assert_eq!(self.components, 3, "vector_samples_on needs a 3-vector field");
        let cols: Vec<Vec<Complex64>> = (0..3).map(|c| self.component_samples_on(c, len)).collect();
        (0..len)
            .map(|j| [cols[0][j].re, cols[1][j].re, cols[2][j].re])
            .collect()
    }

    pub fn vector_samples(&self) -> Vec<[f64; 3]> {
        self.vector_samples_on(self.grid)
    }

    /// Scalar field of grid size `grid` from samples on a finer `len`-point
    /// grid, truncated to `|n| <= grid/2 - 1` (Nyquist kept when `len == grid`).
    pub fn from_padded_samples(grid: usize, samples: &[Complex64]) -> Result<Self> {
        check_grid(grid)?;
        let len = samples.len();
        if len < grid {
            return Err(ElasticaError::SampleCount {
                expected: grid,
                got: len,
            });
        }
        let mut buf = samples.to_vec();
        fft_forward(&mut buf);
        let scale = 1.0 / len as f64;
        let mut out = Self::zeros(grid, 1)?;
        let half = (grid / 2) as i64;
        let lo = if len == grid { -half } else { -half + 1 };
        for n in lo..half {
            out.modes[slot(n, grid)] = buf[slot(n, len)] * scale;
        }
        Ok(out)
    }

    pub fn from_padded_real(grid: usize, samples: &[f64]) -> Result<Self> {
        let buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_padded_samples(grid, &buf)
    }

    pub fn from_padded_vector(grid: usize, samples: &[[f64; 3]]) -> Result<Self> {
        let mut modes = Vec::with_capacity(3 * grid);
        for c in 0..3 {
            let comp: Vec<f64> = samples.iter().map(|x| x[c]).collect();
            modes.extend(Self::from_padded_real(grid, &comp)?.modes);
        }
        Self::from_modes(grid, 3, modes)
    }

    /// Multiplies mode `n` by `(i(n+shift))^order`, componentwise.
    pub fn differentiate(&self, order: u32, shift: f64) -> PeriodicField {
        assert!(order <= 4, "derivative order {order} exceeds 4");
        let mut out = self.clone();
        if order == 0 {
            return out;
        }
        for c in 0..self.components {
            for j in 0..self.grid {
                let k = wavenumber(j, self.grid) as f64 + shift;
                let factor = (I * k).powu(order);
                out.modes[c * self.grid + j] *= factor;
            }
        }
        out
    }

    /// `√(Σ (1+n²)^r |f̂(n)|²)`, summed over components.
    pub fn sobolev_norm(&self, r: SobolevIndex) -> f64 {
        let r = r.value();
        let mut acc = 0.0;
        for c in 0..self.components {
            for j in 0..self.grid {
                let n = wavenumber(j, self.grid) as f64;
                acc += (1.0 + n * n).powf(r) * self.modes[c * self.grid + j].norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Dealiased product. A scalar may multiply a vector field.
    pub fn multiply(&self, other: &PeriodicField) -> Result<PeriodicField> {
        if self.grid != other.grid {
            return Err(ElasticaError::GridMismatch {
                left: self.grid,
                right: other.grid,
            });
        }
        let comps = match (self.components, other.components) {
            (a, b) if a == b => a,
            (1, b) => b,
            (a, 1) => a,
            (a, b) => return Err(ElasticaError::ComponentMismatch { left: a, right: b }),
        };
        let len = padded_len(self.grid);
        let mut modes = Vec::with_capacity(comps * self.grid);
        for c in 0..comps {
            let a = self.component_samples_on(c.min(self.components - 1), len);
            let b = other.component_samples_on(c.min(other.components - 1), len);
            let prod: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
            modes.extend(Self::from_padded_samples(self.grid, &prod)?.modes);
        }
        Self::from_modes(self.grid, comps, modes)
    }

    pub fn conj(&self) -> PeriodicField {
        let mut out = self.clone();
        for c in 0..self.components {
            for j in 0..self.grid {
                let n = wavenumber(j, self.grid);
                // on the sample grid the Nyquist mode is its own partner
                out.modes[c * self.grid + j] = self.modes[c * self.grid + slot(-n, self.grid)].conj();
            }
        }
        out
    }

    /// Projection onto real-valued functions, `(f + f̄)/2`.
    pub fn real_part(&self) -> PeriodicField {
        (self + &self.conj()) * 0.5
    }

    /// Largest `|f̂(-n) - conj f̂(n)|`; zero for real fields.
    pub fn hermitian_defect(&self) -> f64 {
        let half = (self.grid / 2) as i64;
        let mut worst: f64 = 0.0;
        for c in 0..self.components {
            for n in (-half + 1)..half {
                let a = self.mode_of(c, n);
                let b = self.mode_of(c, -n);
                worst = worst.max((b - a.conj()).norm());
            }
            worst = worst.max(self.mode_of(c, -half).im.abs());
        }
        worst
    }

    pub fn without_nyquist(mut self) -> PeriodicField {
        let half = self.grid / 2;
        for c in 0..self.components {
            self.modes[c * self.grid + half] = Complex64::new(0.0, 0.0);
        }
        self
    }

    pub fn scale(&self, factor: Complex64) -> PeriodicField {
        let mut out = self.clone();
        out.modes.iter_mut().for_each(|m| *m *= factor);
        out
    }

    /// Largest absolute coefficient.
    pub fn max_mode_abs(&self) -> f64 {
        self.modes.iter().map(|m| m.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.modes.iter().all(|m| m.re.is_finite() && m.im.is_finite())
    }

    /// Pointwise evaluation of a scalar field at an arbitrary `s`.
    pub fn eval(&self, s: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &m) in self.component_modes(0).iter().enumerate() {
            let n = wavenumber(j, self.grid) as f64;
            acc += m * Complex64::from_polar(1.0, n * s);
        }
        acc
    }

    /// `g(s) = f(s + offset)`.
    pub fn translate(&self, offset: f64) -> PeriodicField {
        let mut out = self.clone();
        for c in 0..self.components {
            for j in 0..self.grid {
                let n = wavenumber(j, self.grid) as f64;
                out.modes[c * self.grid + j] *= Complex64::from_polar(1.0, n * offset);
            }
        }
        out
    }

    /// Mean-free antiderivative; the mean is dropped.
    pub fn antiderivative(&self) -> PeriodicField {
        let mut out = self.clone();
        for c in 0..self.components {
            for j in 0..self.grid {
                let n = wavenumber(j, self.grid);
                let idx = c * self.grid + j;
                out.modes[idx] = if n == 0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    self.modes[idx] / (I * n as f64)
                };
            }
        }
        out
    }
}

fn zip_modes(a: &PeriodicField, b: &PeriodicField, op: impl Fn(Complex64, Complex64) -> Complex64) -> PeriodicField {
    assert_eq!(a.grid, b.grid, "grid mismatch");
    assert_eq!(a.components, b.components, "component mismatch");
    PeriodicField {
        grid: a.grid,
        components: a.components,
        modes: a.modes.iter().zip(&b.modes).map(|(&x, &y)| op(x, y)).collect(),
    }
}

impl Add for &PeriodicField {
    type Output = PeriodicField;
    fn add(self, rhs: &PeriodicField) -> PeriodicField {
        zip_modes(self, rhs, |x, y| x + y)
    }
}

impl Sub for &PeriodicField {
    type Output = PeriodicField;
    fn sub(self, rhs: &PeriodicField) -> PeriodicField {
        zip_modes(self, rhs, |x, y| x - y)
    }
}

impl Add for PeriodicField {
    type Output = PeriodicField;
    fn add(self, rhs: PeriodicField) -> PeriodicField {
        &self + &rhs
    }
}

impl Sub for PeriodicField {
    type Output = PeriodicField;
    fn sub(self, rhs: PeriodicField) -> PeriodicField {
        &self - &rhs
    }
}

impl Neg for PeriodicField {
    type Output = PeriodicField;
    fn neg(mut self) -> PeriodicField {
        self.modes.iter_mut().for_each(|m| *m = -*m);
        self
    }
}

impl Mul<f64> for PeriodicField {
    type Output = PeriodicField;
    fn mul(mut self, rhs: f64) -> PeriodicField {
        self.modes.iter_mut().for_each(|m| *m *= rhs);
        self
    }
}

impl Mul<Complex64> for PeriodicField {
    type Output = PeriodicField;
    fn mul(self, rhs: Complex64) -> PeriodicField {
        self.scale(rhs)
    }
}

/// `√(‖P‖²_{H^r} + ‖Q‖²_{H^{r+1}})`.
pub fn y_norm(p: &PeriodicField, q: &PeriodicField, r: SobolevIndex) -> f64 {
    let rq = SobolevIndex(r.value() + 1.0);
    (p.sobolev_norm(r).powi(2) + q.sobolev_norm(rq).powi(2)).sqrt()
}
