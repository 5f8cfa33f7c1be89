use elastica_core::tension::*;
use elastica_core::spectral::*;
use elastica_core::ElasticaError;
use num_complex::Complex64;
use elastica_core::geometry::CurveState;
use std::f64::consts::PI;

const N: usize = 32;

/// Galerkin modes: everything but Nyquist.
fn band(grid: usize) -> std::ops::Range<i64> {
    let half = (grid / 2) as i64;
    (-half + 1)..half
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn sup_dev(f: &PeriodicField, value: f64) -> f64 {
    f.real_samples_on(padded_len(f.grid()))
        .iter()
        .map(|x| (x - value).abs())
        .fold(0.0, f64::max)
}

fn circle_state(v: PeriodicField) -> CurveState {
    let u = PeriodicField::from_vector_fn(N, |s| [-s.sin(), s.cos(), 0.0]).unwrap();
    CurveState::new(u, v, [0.0; 3]).unwrap()
}

#[test]
fn operator_for_constant_and_cosine_potential() {
    let one = PeriodicField::constant(N, c(1.0)).unwrap();
    let m = assemble_operator(&one);
    for (i, n) in band(N).enumerate() {
        for j in 0..m.ncols() {
            let expect = if i == j { (n * n) as f64 + 1.0 } else { 0.0 };
            assert!((m[(i, j)] - c(expect)).norm() < 1e-15);
        }
    }
    let k2 = PeriodicField::from_real_fn(N, |s| 1.0 + s.cos()).unwrap();
    let m = assemble_operator(&k2);
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let d = (i as i64 - j as i64).abs();
            let expect = match d {
                0 => {
                    let n = band(N).nth(i).unwrap();
                    (n * n) as f64 + 1.0
                }
                1 => 0.5,
                _ => 0.0,
            };
            assert!((m[(i, j)] - c(expect)).norm() < 1e-14, "({i},{j})");
        }
    }
}

#[test]
fn operator_is_hermitian_for_real_potential() {
    let k2 = PeriodicField::from_real_fn(N, |s| (s.sin() * 1.3).exp() + 0.2 * (5.0 * s).cos()).unwrap();
    assert!(hermiticity_defect(&assemble_operator(&k2)) <= 1e-14);
    let ev = spectrum(&k2);
    assert_eq!(ev.len(), N - 1);
}

#[test]
fn tension_of_circle_and_latitude_at_rest() {
    let lam = solve_tension(&circle_state(PeriodicField::zeros(N, 3).unwrap())).unwrap();
    assert!(sup_dev(&lam, -1.0) < 1e-12);

    for psi in [PI / 3.0, 0.4, 2.0] {
        let u = PeriodicField::from_vector_fn(N, move |s| [psi.sin() * s.cos(), psi.sin() * s.sin(), psi.cos()])
            .unwrap();
        let st = CurveState::new(u, PeriodicField::zeros(N, 3).unwrap(), [0.0; 3]).unwrap();
        assert!(sup_dev(&solve_tension(&st).unwrap(), -1.0) < 1e-12, "psi = {psi}");
    }
}

#[test]
fn tension_of_circle_moving_along_binormal() {
    let b = PeriodicField::from_vector_fn(N, |_| [0.0, 0.0, 1.0]).unwrap();
    let lam = solve_tension(&circle_state(b)).unwrap();
    assert!(sup_dev(&lam, 0.0) < 1e-12);
}

#[test]
fn mu_examples() {
    let zero = PeriodicField::zeros(N, 1).unwrap();
    let one = PeriodicField::constant(N, c(1.0)).unwrap();
    let mu = solve_mu(&zero, &one, 0.0).unwrap();
    assert!(sup_dev(&mu, 1.0) < 1e-13);
    let lam = &mu - &(one.clone() * 2.0);
    assert!(sup_dev(&lam, -1.0) < 1e-13);

    let i = PeriodicField::constant(N, Complex64::new(0.0, 1.0)).unwrap();
    let mu = solve_mu(&i, &one, 0.0).unwrap();
    assert!(sup_dev(&mu, 2.0) < 1e-13);

    assert_eq!(solve_mu(&zero, &zero, 0.0), Err(ElasticaError::SingularOperator));
}

#[test]
fn solve_then_apply_recovers_rhs() {
    let k2 = PeriodicField::from_real_fn(N, |s| 0.8 + 0.5 * s.sin() + 0.1 * (3.0 * s).cos()).unwrap();
    let f = PeriodicField::from_real_fn(N, |s| (2.0 * s).cos() + 0.3).unwrap();
    let x = solve_elliptic(&k2, &f).unwrap();
    let back = apply_operator(&k2, &x).unwrap();
    let err: f64 = (&back - &f.clone().without_nyquist()).modes().iter().map(|m| m.norm_sqr()).sum::<f64>();
    let scale: f64 = f.modes().iter().map(|m| m.norm_sqr()).sum();
    assert!((err / scale).sqrt() < 1e-10);
}

#[test]
fn lowest_eigenvalue_examples() {
    let one = PeriodicField::constant(N, c(1.0)).unwrap();
    assert!((lowest_eigenvalue(&one).unwrap() - 1.0).abs() < 1e-12);
    let k = PeriodicField::constant(N, c(0.7)).unwrap();
    assert!((lowest_eigenvalue(&k).unwrap() - 0.49).abs() < 1e-12);
}

#[test]
fn resolvent_iteration_examples() {
    let one = PeriodicField::constant(N, c(1.0)).unwrap();
    let f = PeriodicField::from_real_fn(N, |s| s.cos() + 2.0).unwrap();
    let r = resolvent_crosscheck(&one, &f, 1e-14, 50).unwrap();
    assert!(r.iterations <= 2);
    assert!(r.discrepancy < 1e-15);

    let k = PeriodicField::from_real_fn(N, |s| 1.0 + 0.1 * s.cos()).unwrap();
    let r = resolvent_crosscheck(&k, &one, 1e-14, 200).unwrap();
    assert!(r.discrepancy <= 1e-10, "{}", r.discrepancy);
}

#[test]
fn resolvent_iteration_diverges_far_from_unit_potential() {
    let k = PeriodicField::constant(N, c(3.0)).unwrap();
    let f = PeriodicField::constant(N, c(1.0)).unwrap();
    assert!(matches!(
        resolvent_crosscheck(&k, &f, 1e-14, 200),
        Err(ElasticaError::NonConvergence { .. })
    ));
}
