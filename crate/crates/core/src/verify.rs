//! The acceptance suite: eleven checks with pinned tolerances, each reporting
//! the measured values it was judged on.

use std::f64::consts::PI;
use std::fmt;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{
    direct_dt, evolve_direct, evolve_hasimoto, propagator, step_hasimoto, step_planar, DirectOptions, Diagnostics,
    EvolveOptions, HasimotoSample, StepOptions,
};
use crate::error::Result;
use crate::geometry::{bianchi_residual, curvature, torsion, CurveState};
use crate::hasimoto::{forward_transform, gauge_shift, inverse_transform, parallel_frame, HasimotoState, Triad};
use crate::scenario::{
    doubling_rate, ensemble_member, make_circle, make_latitude, make_latitude_moving, make_perturbed_circle,
    random_velocity, Scenario, ScenarioSpec, ENSEMBLE_GRID,
};
use crate::spectral::PeriodicField;
use crate::tension::{lowest_eigenvalue, solve_mu, solve_tension};
use crate::vec3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub label: String,
    pub value: f64,
    pub limit: f64,
    /// `true` when `value >= limit` is required instead of `value <= limit`.
    pub at_least: bool,
}

impl Measurement {
    pub fn at_most(label: &str, value: f64, limit: f64) -> Self {
        Self {
            label: label.into(),
            value,
            limit,
            at_least: false,
        }
    }

    pub fn at_least(label: &str, value: f64, limit: f64) -> Self {
        Self {
            label: label.into(),
            value,
            limit,
            at_least: true,
        }
    }

    pub fn passed(&self) -> bool {
        if self.at_least {
            self.value >= self.limit
        } else {
            self.value <= self.limit
        }
    }
}

impl fmt::Display for Measurement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.at_least { ">=" } else { "<=" };
        write!(f, "{} = {:.3e} {op} {:e}", self.label, self.value, self.limit)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub criterion: u32,
    pub name: String,
    pub passed: bool,
    pub measurements: Vec<Measurement>,
    /// Set when the check could not be carried out.
    pub error: Option<String>,
    pub seconds: f64,
}

impl Check {
    fn from_result(criterion: u32, name: &str, started: Instant, r: Result<Vec<Measurement>>) -> Self {
        let seconds = started.elapsed().as_secs_f64();
        match r {
            Ok(measurements) => Check {
                criterion,
                name: name.into(),
                passed: !measurements.is_empty() && measurements.iter().all(Measurement::passed),
                measurements,
                error: None,
                seconds,
            },
            Err(e) => Check {
                criterion,
                name: name.into(),
                passed: false,
                measurements: Vec::new(),
                error: Some(e.to_string()),
                seconds,
            },
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "criterion {:>2} {:<28} {status}", self.criterion, self.name)?;
        if let Some(e) = &self.error {
            write!(f, "  error: {e}")?;
        }
        let parts: Vec<String> = self.measurements.iter().map(|m| m.to_string()).collect();
        if !parts.is_empty() {
            write!(f, "  [{}]", parts.join("; "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Grid for the evolution checks.
    pub grid: usize,
    /// Flip the sign of the cubic nonlinearity in every Hasimoto-path run.
    pub mutation: bool,
    /// Random curves for the spectral bound.
    pub ensemble: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            grid: 64,
            mutation: false,
            ensemble: 200,
        }
    }
}

impl VerifyOptions {
    fn step(&self) -> StepOptions {
        StepOptions {
            f3_sign: if self.mutation { -1.0 } else { 1.0 },
            ..StepOptions::default()
        }
    }

    fn evolve(&self, sample_every: usize) -> EvolveOptions {
        EvolveOptions {
            step: self.step(),
            sample_every,
            ..EvolveOptions::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub options: VerifyOptions,
    pub checks: Vec<Check>,
    pub seconds: f64,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn passed_set(&self) -> Vec<u32> {
        self.checks.iter().filter(|c| c.passed).map(|c| c.criterion).collect()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        write!(
            f,
            "{passed}/{} passed (N = {}, mutation = {}) in {:.1} s",
            self.checks.len(),
            self.options.grid,
            self.options.mutation,
            self.seconds
        )
    }
}

pub const CRITERIA: [(u32, &str); 11] = [
    (1, "circle equilibrium"),
    (2, "spectral bound"),
    (3, "hasimoto round trip"),
    (4, "monodromy"),
    (5, "gauge invariance"),
    (6, "conservation"),
    (7, "dual-solver oracle"),
    (8, "propagator"),
    (9, "bianchi identity"),
    (10, "planar consistency"),
    (11, "linear-growth closure"),
];

/// Runs one criterion.
pub fn run_check(criterion: u32, opts: &VerifyOptions) -> Check {
    let name = CRITERIA
        .iter()
        .find(|(c, _)| *c == criterion)
        .map(|(_, n)| *n)
        .unwrap_or("unknown");
    let started = Instant::now();
    let r = match criterion {
        1 => circle_equilibrium(opts),
        2 => spectral_bound(opts),
        3 => round_trip(),
        4 => monodromy(opts),
        5 => gauge_invariance(),
        6 => conservation(opts),
        7 => dual_solver(opts),
        8 => propagator_check(),
        9 => bianchi(),
        10 => planar_consistency(opts),
        11 => linear_growth(opts),
        other => Err(crate::ElasticaError::InvalidParameter(format!("no criterion {other}"))),
    };
    Check::from_result(criterion, name, started, r)
}

pub fn verify(opts: &VerifyOptions) -> Report {
    let started = Instant::now();
    let checks = CRITERIA.iter().map(|(c, _)| run_check(*c, opts)).collect();
    Report {
        options: *opts,
        checks,
        seconds: started.elapsed().as_secs_f64(),
    }
}

fn sup_gap(a: &PeriodicField, b: &PeriodicField) -> f64 {
    vec3::max_distance(&a.vector_samples(), &b.vector_samples())
}

fn mod1_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// `sup |λ + 1|` at the grid points.
fn tension_gap(curve: &CurveState) -> Result<f64> {
    Ok(solve_tension(curve)?
        .real_samples_on(curve.grid())
        .into_iter()
        .map(|l| (l + 1.0).abs())
        .fold(0.0, f64::max))
}

fn failed_run(what: &str, e: &crate::ElasticaError) -> crate::ElasticaError {
    crate::ElasticaError::InvalidParameter(format!("{what} aborted: {e}"))
}

fn circle_equilibrium(opts: &VerifyOptions) -> Result<Vec<Measurement>> {
    let c = make_circle(opts.grid)?;
    let h = HasimotoSample::from_curve(&c)?;
    let tr = evolve_hasimoto(&h, 1.0, 1e-3, &opts.evolve(50))?;
    if let Some(e) = &tr.failure {
        return Err(failed_run("hasimoto run", e));
    }
    let mut gap_h: f64 = 0.0;
    let mut lambda_gap: f64 = 0.0;
    for s in &tr.states {
        let curve = s.curve()?;
        gap_h = gap_h.max(sup_gap(&curve.u, &c.u));
        lambda_gap = lambda_gap.max(tension_gap(&curve)?);
    }
    let td = 0.01;
    let trd = evolve_direct(&c, td, direct_dt(opts.grid, td), &DirectOptions { sample_every: 10, ..Default::default() })?;
    if let Some(e) = &trd.failure {
        return Err(failed_run("direct run", e));
    }
    let mut gap_d: f64 = 0.0;
    for s in &trd.states {
        gap_d = gap_d.max(sup_gap(&s.u, &c.u));
        lambda_gap = lambda_gap.max(tension_gap(s)?);
    }
    Ok(vec![
        Measurement::at_most("hasimoto sup|u-u0| (T=1)", gap_h, 1e-6),
        Measurement::at_most("direct sup|u-u0| (T=0.01)", gap_d, 1e-6),
        Measurement::at_most("sup|lambda+1|", lambda_gap, 1e-8),
    ])
}

fn spectral_bound(opts: &VerifyOptions) -> Result<Vec<Measurement>> {
    let mut e0_min = f64::INFINITY;
    for seed in 0..opts.ensemble as u64 {
        let sc = Scenario::build(ensemble_member(seed, seed % 2 == 0), ENSEMBLE_GRID)?;
        e0_min = e0_min.min(lowest_eigenvalue(&curvature(&sc.initial.u)?)?);
    }
    let circle = lowest_eigenvalue(&curvature(&make_circle(opts.grid)?.u)?)?;
    Ok(vec![
        Measurement::at_least(&format!("min e0 over {} curves", opts.ensemble), e0_min, 0.25 - 1e-6),
        Measurement::at_most("|e0(circle)-1|", (circle - 1.0).abs(), 1e-10),
        Measurement::at_most("max resolvent norm 1/e0", 1.0 / e0_min, 4.0 + 1e-6),
    ])
}

fn random_pair(seed: u64) -> Result<(PeriodicField, PeriodicField)> {
    let planar = seed.is_multiple_of(2);
    let sc = Scenario::build(ensemble_member(seed, planar), ENSEMBLE_GRID)?;
    let u1 = random_velocity(&sc.initial.u, seed, 0.3, planar)?;
    Ok((sc.initial.u, u1))
}

fn round_trip() -> Result<Vec<Measurement>> {
    let mut worst: f64 = 0.0;
    for seed in 0..50 {
        let (u0, u1) = random_pair(seed)?;
        let fw = forward_transform(&u0, &u1)?;
        let inv = inverse_transform(&fw.state, &fw.seed)?;
        worst = worst.max(sup_gap(&inv.u0, &u0)).max(sup_gap(&inv.u1, &u1));
    }
    Ok(vec![Measurement::at_most("worst sup error over 50 pairs", worst, 1e-8)])
}

fn min_kappa(u: &PeriodicField) -> Result<f64> {
    Ok(curvature(u)?
        .real_samples_on(3 * u.grid())
        .into_iter()
        .fold(f64::INFINITY, f64::min))
}

fn monodromy(opts: &VerifyOptions) -> Result<Vec<Measurement>> {
    let psi = PI / 3.0;
    let lat = make_latitude(opts.grid, psi)?;
    let holonomy = parallel_frame(&lat.u, &Triad::canonical(&lat.u))?.beta;
    let (_, t) = torsion(&lat.u)?;
    let mut curves = vec![lat.u.clone(), make_perturbed_circle(opts.grid, 0.01, 2, false, 1.0)?.u];
    for seed in 0..30 {
        curves.push(Scenario::build(ensemble_member(seed, seed % 2 == 0), ENSEMBLE_GRID)?.initial.u);
    }
    let mut worst: f64 = 0.0;
    let mut used = 0;
    for u in &curves {
        if min_kappa(u)? < 0.05 {
            continue;
        }
        let a = parallel_frame(u, &Triad::canonical(u))?.beta;
        let (_, b) = torsion(u)?;
        worst = worst.max(mod1_distance(a, b.monodromy));
        used += 1;
    }
    Ok(vec![
        Measurement::at_most("latitude holonomy vs cos psi", mod1_distance(holonomy, psi.cos()), 1e-6),
        Measurement::at_most("latitude mean torsion vs cos psi", mod1_distance(t.monodromy, psi.cos()), 1e-6),
        Measurement::at_most(&format!("holonomy vs torsion, {used} curves"), worst, 1e-6),
    ])
}

fn gauge_invariance() -> Result<Vec<Measurement>> {
    let mut worst: f64 = 0.0;
    let mut states: Vec<HasimotoState> = Vec::new();
    for seed in [4, 9] {
        let (u0, u1) = random_pair(seed)?;
        states.push(forward_transform(&u0, &u1)?.state);
    }
    let c = make_perturbed_circle(ENSEMBLE_GRID, 0.01, 2, false, 1.0)?;
    states.push(forward_transform(&c.u, &c.v)?.state);
    for st in &states {
        let kappa = st.kappa()?;
        let theta = st.torsion()?;
        let mu = solve_mu(&st.p, &st.q, st.beta)?;
        for k in -2..=2 {
            for s0 in [0.0, PI / 3.0, PI] {
                let g = gauge_shift(st, k, s0);
                worst = worst
                    .max((&g.kappa()? - &kappa).max_mode_abs())
                    .max((&g.torsion()? - &theta).max_mode_abs())
                    .max((&solve_mu(&g.p, &g.q, g.beta)? - &mu).max_mode_abs());
            }
        }
    }
    Ok(vec![Measurement::at_most("max change of kappa, theta, mu", worst, 1e-10)])
}

/// Checks that hold along any accepted trajectory; `closed` means `∮ v₀ = 0`.
pub fn trajectory_measurements(diags: &[Diagnostics], closed: bool) -> Vec<Measurement> {
    let first = diags.first();
    let drift = first
        .map(|f| {
            diags
                .iter()
                .map(|d| (d.energy - f.energy).abs() / f.energy.max(1.0))
                .fold(0.0, f64::max)
        })
        .unwrap_or(0.0);
    let max = |g: fn(&Diagnostics) -> f64| diags.iter().map(g).fold(0.0, f64::max);
    let mut out = vec![
        Measurement::at_most("unit defect", max(|d| d.unit_defect), 1e-6),
        Measurement::at_most("orthogonality defect", max(|d| d.orthogonality_defect), 1e-6),
    ];
    if closed {
        out.insert(0, Measurement::at_most("relative energy drift", drift, 1e-4));
        let c0 = first.map(|f| f.closure).unwrap_or([0.0; 3]);
        if vec3::norm(c0) <= 1e-6 {
            out.push(Measurement::at_most("closure defect", max(|d| d.closure_defect), 1e-6));
        } else {
            // an open loop at rest keeps its closure defect
            let moved = diags.iter().map(|d| vec3::norm(vec3::sub(d.closure, c0))).fold(0.0, f64::max);
            out.push(Measurement::at_most("closure defect change", moved, 1e-6));
        }
    }
    let contraction = diags
        .iter()
        .map(|d| d.contraction)
        .filter(|c| c.is_finite())
        .fold(0.0, f64::max);
    out.push(Measurement::at_most("max Picard contraction", contraction, 1.0 - f64::EPSILON));
    out
}

fn conservation(opts: &VerifyOptions) -> Result<Vec<Measurement>> {
    let sc = Scenario::build(ScenarioSpec::standard_planar(), opts.grid)?;
    let h = HasimotoSample::from_curve(&sc.initial)?;
    let tr = evolve_hasimoto(&h, 0.1, 1e-3, &opts.evolve(5))?;
    if let Some(e) = &tr.failure {
        return Err(failed_run("hasimoto run", e));
    }
    Ok(trajectory_measurements(&tr.diagnostics, true))
}

fn hasimoto_final(initial: &CurveState, t: f64, dt: f64, opts: &VerifyOptions) -> Result<CurveState> {
    let h = HasimotoSample::from_curve(initial)?;
    let tr = evolve_hasimoto(&h, t, dt, &opts.evolve(usize::MAX))?;
    if let Some(e) = &tr.failure {
        return Err(failed_run("hasimoto run", e));
    }
    tr.last().expect("at least the initial sample").curve()
}

fn direct_final(initial: &CurveState, t: f64, dt: f64) -> Result<CurveState> {
    let tr = evolve_direct(initial, t, dt, &DirectOptions { sample_every: usize::MAX, ..Default::default() })?;
    if let Some(e) = &tr.failure {
        return Err(failed_run("direct run", e));
    }
    Ok(tr.last().expect("at least the initial sample").clone())
}

fn dual_solver(opts: &VerifyOptions) -> Result<Vec<Measurement>> {
    let sc = Scenario::build(ScenarioSpec::standard_planar(), opts.grid)?;
    let t = 0.05;
    let (dt, ddt) = (1e-3, direct_dt(opts.grid, t));
    let coarse = sup_gap(&hasimoto_final(&sc.initial, t, dt, opts)?.u, &direct_final(&sc.initial, t, ddt)?.u);
    let fine = sup_gap(
        &hasimoto_final(&sc.initial, t, 0.5 * dt, opts)?.u,
        &direct_final(&sc.initial, t, 0.5 * ddt)?.u,
    );
    Ok(vec![
        Measurement::at_most("sup|u_H-u_D| at dt=1e-3", coarse, 1e-3),
        Measurement::at_most("sup|u_H-u_D| at dt=5e-4", fine, 1e-3),
        Measurement::at_least("reduction factor", coarse / fine, 4.0),
    ])
}

type M2 = [[Complex64; 2]; 2];

fn mat_mul(a: &M2, b: &M2) -> M2 {
    let mut c = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

/// `exp(dt·[[0, ik³], [ik, 0]])` by scaling and squaring of a Taylor series.
fn expm_reference(k: f64, dt: f64) -> M2 {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let size = (k.abs().powi(3) * dt).max(k.abs() * dt);
    let squarings = if size > 0.1 { (size / 0.1).log2().ceil() as i32 } else { 0 };
    let h = dt * 0.5f64.powi(squarings);
    let a = [[zero, i * k.powi(3) * h], [i * k * h, zero]];
    let mut sum = [[one, zero], [zero, one]];
    let mut term = sum;
    for j in 1..30 {
        term = mat_mul(&term, &a);
        for z in term.iter_mut().flatten() {
            *z /= j as f64;
        }
        for (s, t) in sum.iter_mut().flatten().zip(term.iter().flatten()) {
            *s += t;
        }
    }
    for _ in 0..squarings {
        sum = mat_mul(&sum, &sum);
    }
    sum
}

fn relative_gap(a: &M2, b: &M2) -> f64 {
    let size = b.iter().flatten().map(|z| z.norm()).fold(1.0, f64::max);
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
        / size
}

fn propagator_check() -> Result<Vec<Measurement>> {
    let betas = [0.0, 0.5, -0.5, 0.49, -0.49];
    let (mut oracle, mut semigroup, mut bound): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for n in -32..=32i64 {
        for beta in betas {
            for dt in [1e-3, 1e-2] {
                let m = propagator(n, beta, dt);
                oracle = oracle.max(relative_gap(&m.matrix, &expm_reference(n as f64 + beta, dt)));
                let half = propagator(n, beta, 0.5 * dt).matrix;
                let third = propagator(n, beta, dt / 3.0).matrix;
                let rest = propagator(n, beta, 2.0 * dt / 3.0).matrix;
                semigroup = semigroup
                    .max(relative_gap(&mat_mul(&half, &half), &m.matrix))
                    .max(relative_gap(&mat_mul(&third, &rest), &m.matrix));
                bound = bound.max(m.weighted_norm() / m.norm_bound());
            }
        }
    }
    Ok(vec![
        Measurement::at_most("closed form vs expm (relative)", oracle, 1e-12),
        Measurement::at_most("semigroup defect (relative)", semigroup, 1e-12),
        Measurement::at_most("max norm / bound", bound, 1.0),
    ])
}

fn bianchi() -> Result<Vec<Measurement>> {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for seed in 0..50 {
        let sc = Scenario::build(ensemble_member(seed, seed % 2 == 0), ENSEMBLE_GRID)?;
        worst = worst.max(bianchi_residual(&sc.initial.u)?.1);
        count += 1;
    }
    for (eps, mode) in [(0.05, 2), (0.1, 3)] {
        worst = worst.max(bianchi_residual(&make_perturbed_circle(ENSEMBLE_GRID, eps, mode, false, 0.0)?.u)?.1);
        count += 1;
    }
    Ok(vec![Measurement::at_most(&format!("max residual over {count} fields"), worst, 1e-6)])
}

fn max_imag(f: &PeriodicField) -> f64 {
    f.samples().iter().map(|z| z.im.abs()).fold(0.0, f64::max)
}

fn planar_consistency(opts: &VerifyOptions) -> Result<Vec<Measurement>> {
    let sc = Scenario::build(ScenarioSpec::standard_planar(), opts.grid)?;
    let mut a = HasimotoSample::from_curve(&sc.initial)?.state;
    let mut b = a.clone();
    let step = opts.step();
    let (mut imag, mut gap): (f64, f64) = (max_imag(&a.p).max(max_imag(&a.q)), 0.0);
    for _ in 0..100 {
        a = step_hasimoto(&a, 1e-3, &step)?.state;
        b = step_planar(&b, 1e-3, &step)?.state;
        imag = imag.max(max_imag(&a.p)).max(max_imag(&a.q)).max(a.beta.abs());
        gap = gap.max((&a.p - &b.p).max_mode_abs()).max((&a.q - &b.q).max_mode_abs());
    }
    Ok(vec![
        Measurement::at_most("max imaginary part (100 steps)", imag, 1e-10),
        Measurement::at_most("general vs planar stepper", gap, 1e-12),
    ])
}

fn linear_growth(opts: &VerifyOptions) -> Result<Vec<Measurement>> {
    let psi = PI / 3.0;
    let c = make_latitude_moving(opts.grid, psi, doubling_rate(psi))?;
    let h = HasimotoSample::from_curve(&c)?;
    let tr = evolve_hasimoto(&h, 0.1, 1e-3, &opts.evolve(10))?;
    if let Some(e) = &tr.failure {
        return Err(failed_run("hasimoto run", e));
    }
    let mut worst: f64 = 0.0;
    for d in &tr.diagnostics {
        // x(s+2π) − x(s) = 2π ∮u ds/2π; the 2π cancels in the relative error
        let want = vec3::scale([0.0, 0.0, psi.cos()], 1.0 + d.t);
        worst = worst.max(vec3::norm(vec3::sub(d.closure, want)) / vec3::norm(want));
    }
    Ok(vec![Measurement::at_most("relative closure error vs (0,0,cos psi)(1+t)", worst, 1e-4)])
}
