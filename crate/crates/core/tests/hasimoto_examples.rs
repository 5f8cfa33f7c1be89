use elastica_core::hasimoto::*;
use elastica_core::spectral::*;
use elastica_core::vec3;
use elastica_core::ElasticaError;
use num_complex::Complex64;
use std::f64::consts::PI;

const N: usize = 32;

fn circle() -> PeriodicField {
    PeriodicField::from_vector_fn(N, |s| [-s.sin(), s.cos(), 0.0]).unwrap()
}

fn latitude(psi: f64) -> PeriodicField {
    PeriodicField::from_vector_fn(N, move |s| [psi.sin() * s.cos(), psi.sin() * s.sin(), psi.cos()]).unwrap()
}

fn zero_vec() -> PeriodicField {
    PeriodicField::zeros(N, 3).unwrap()
}

fn sup_dev(f: &PeriodicField, value: Complex64) -> f64 {
    f.samples().iter().map(|z| (z - value).norm()).fold(0.0, f64::max)
}

#[test]
fn canonical_seed_of_circle() {
    let t = Triad::canonical(&circle());
    assert!(vec3::norm(vec3::sub(t.e1, [-1.0, 0.0, 0.0])) < 1e-14);
    assert!(vec3::norm(vec3::sub(t.e2, [0.0, 0.0, 1.0])) < 1e-14);
    assert!(t.defect() < 1e-14);
}

#[test]
fn circle_frame_is_normal_plus_i_e3() {
    let pf = parallel_frame(&circle(), &Triad::canonical(&circle())).unwrap();
    assert!(pf.beta.abs() < 1e-12);
    for (j, s) in grid_points(N).into_iter().enumerate() {
        assert!(vec3::norm(vec3::sub(pf.frame.e1[j], [-s.cos(), -s.sin(), 0.0])) < 1e-10);
        assert!(vec3::norm(vec3::sub(pf.frame.e2[j], [0.0, 0.0, 1.0])) < 1e-10);
    }
    assert!(pf.drift < 1e-9);
}

#[test]
fn latitude_monodromy() {
    let psi = PI / 3.0;
    let u = latitude(psi);
    let pf = parallel_frame(&u, &Triad::canonical(&u)).unwrap();
    // cos ψ = 1/2 sits on the branch cut
    let d = (pf.beta - psi.cos()).rem_euclid(1.0);
    assert!(d.min(1.0 - d) < 1e-6, "beta = {}", pf.beta);
    assert!(pf.drift < 1e-9);

    let other = latitude(1.1);
    let pf = parallel_frame(&other, &Triad::canonical(&other)).unwrap();
    assert!((pf.beta - 1.1f64.cos()).abs() < 1e-6);
    let great = latitude(PI / 2.0);
    assert!(parallel_frame(&great, &Triad::canonical(&great)).unwrap().beta.abs() < 1e-10);
}

#[test]
fn bad_seed_is_rejected() {
    let u = circle();
    let mut t = Triad::canonical(&u);
    t.e1 = [1.0, 1.0, 0.0];
    assert!(matches!(parallel_frame(&u, &t), Err(ElasticaError::BadSeed { .. })));
    let flipped = Triad {
        e2: vec3::scale(Triad::canonical(&u).e2, -1.0),
        ..Triad::canonical(&u)
    };
    assert!(matches!(parallel_frame(&u, &flipped), Err(ElasticaError::BadSeed { .. })));
}

#[test]
fn forward_examples() {
    let f = forward_transform(&circle(), &zero_vec()).unwrap().state;
    assert!(f.beta.abs() < 1e-12);
    assert!(sup_dev(&f.q, Complex64::new(1.0, 0.0)) < 1e-10);
    assert!(f.p.max_mode_abs() < 1e-15);

    let psi = PI / 3.0;
    let f = forward_transform(&latitude(psi), &zero_vec()).unwrap().state;
    assert!((f.beta + 0.5).abs() < 1e-6 || (f.beta - 0.5).abs() < 1e-6);
    let k = f.kappa().unwrap();
    assert!(sup_dev(&k, Complex64::new(psi.sin(), 0.0)) < 1e-8);

    let b = PeriodicField::from_vector_fn(N, |_| [0.0, 0.0, 0.1]).unwrap();
    let f = forward_transform(&circle(), &b).unwrap().state;
    assert!(sup_dev(&f.p, Complex64::new(0.0, 0.1)) < 1e-10);
}

#[test]
fn inverse_examples() {
    let q = PeriodicField::constant(N, Complex64::new(1.0, 0.0)).unwrap();
    let p = PeriodicField::zeros(N, 1).unwrap();
    let state = HasimotoState::new(p.clone(), q.clone(), 0.0).unwrap();
    let seed = Triad::canonical(&circle());
    let inv = inverse_transform(&state, &seed).unwrap();
    assert!(inv.periodicity_defect < 1e-10);
    let err = vec3::max_distance(&inv.u0.vector_samples(), &circle().vector_samples());
    assert!(err < 1e-10, "{err:e}");

    let bad = HasimotoState::new(p, q, 0.3).unwrap();
    assert!(matches!(inverse_transform(&bad, &seed), Err(ElasticaError::Incompatible { .. })));
}

#[test]
fn alpha_examples() {
    let one = PeriodicField::constant(N, Complex64::new(1.0, 0.0)).unwrap();
    let zero = PeriodicField::zeros(N, 1).unwrap();
    assert_eq!(compute_alpha(&zero, &one).unwrap().max_mode_abs(), 0.0);
    let i = PeriodicField::constant(N, Complex64::new(0.0, 1.0)).unwrap();
    assert!(compute_alpha(&i, &one).unwrap().max_mode_abs() < 1e-16);
    let p = PeriodicField::from_fn(N, |s| Complex64::from_polar(1.0, 2.0 * s)).unwrap();
    let a = compute_alpha(&p, &one).unwrap();
    let exact = PeriodicField::from_real_fn(N, |s| -(2.0 * s).cos() / 2.0).unwrap();
    assert!((&a - &exact).max_mode_abs() < 1e-15);
}

#[test]
fn drift_examples() {
    let one = PeriodicField::constant(N, Complex64::new(1.0, 0.0)).unwrap();
    let zero = PeriodicField::zeros(N, 1).unwrap();
    let i = PeriodicField::constant(N, Complex64::new(0.0, 1.0)).unwrap();
    let e = PeriodicField::from_fn(N, |s| Complex64::from_polar(1.0, s)).unwrap();
    assert_eq!(monodromy_drift(&zero, &one), 0.0);
    assert!((monodromy_drift(&i, &one) - 1.0).abs() < 1e-15);
    assert!(monodromy_drift(&e, &one).abs() < 1e-15);
}

#[test]
fn gauge_examples() {
    let psi = PI / 3.0;
    let st = forward_transform(&latitude(psi), &zero_vec()).unwrap().state;
    let rotated = gauge_shift(&st, 0, PI);
    assert!((&rotated.kappa().unwrap() - &st.kappa().unwrap()).max_mode_abs() < 1e-14);

    let k = if st.beta > 0.0 { 1 } else { -1 };
    let flipped = gauge_shift(&st, k, 0.0);
    assert!((flipped.beta + st.beta).abs() < 1e-6);
    assert!((&flipped.kappa().unwrap() - &st.kappa().unwrap()).max_mode_abs() < 1e-10);
    assert!((&flipped.torsion().unwrap() - &st.torsion().unwrap()).max_mode_abs() < 1e-10);

    let twice = gauge_shift(&gauge_shift(&st, 1, 0.2), -2, 0.3);
    let once = gauge_shift(&st, -1, 0.5);
    assert!((&twice.q - &once.q).max_mode_abs() < 1e-15);
    assert_eq!(twice.beta, once.beta);
}

#[test]
fn triad_rotation_matches_small_steps() {
    let t = Triad::canonical(&latitude(1.0));
    let (a, b, c) = (0.3, -0.2, 0.5);
    let big = t.rotate(a, b, c);
    let mut small = t;
    for _ in 0..1000 {
        small = small.rotate(a / 1000.0, b / 1000.0, c / 1000.0);
    }
    assert!(big.distance(&small) < 1e-12);
    assert!(big.defect() < 1e-14);
    // generator check: u' = a e₁ + b e₂
    let eps = 1e-7;
    let d = t.rotate(a * eps, b * eps, c * eps);
    let du = vec3::scale(vec3::sub(d.u, t.u), 1.0 / eps);
    let want = vec3::add(vec3::scale(t.e1, a), vec3::scale(t.e2, b));
    assert!(vec3::norm(vec3::sub(du, want)) < 1e-6);
}
