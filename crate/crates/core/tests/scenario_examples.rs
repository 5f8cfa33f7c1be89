use elastica_core::scenario::*;
use elastica_core::vec3;
use elastica_core::PeriodicField;
use elastica_core::geometry::{check_compatibility, curvature, energies, reconstruct_position, torsion};
use elastica_core::tension::{lowest_eigenvalue, solve_tension};
use std::f64::consts::PI;

#[test]
fn circle_scenario() {
    let st = make_circle(32).unwrap();
    let k = curvature(&st.u).unwrap();
    assert!((&k - &PeriodicField::from_real_fn(32, |_| 1.0).unwrap()).max_mode_abs() < 1e-14);
    assert!((energies(&st).unwrap().potential - 0.5).abs() < 1e-14);
    let lambda = solve_tension(&st).unwrap();
    assert!((lambda.mode(0).re + 1.0).abs() < 1e-12);
    assert!(vec3::norm(reconstruct_position(&st.u, [0.0; 3]).closure_defect) < 1e-15);
    assert!((lowest_eigenvalue(&k).unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn latitude_scenarios() {
    let psi = PI / 3.0;
    let st = make_latitude(32, psi).unwrap();
    let (theta, t) = torsion(&st.u).unwrap();
    assert!((t.monodromy - psi.cos()).abs() < 1e-12);
    assert!((theta.mode(1)).norm() < 1e-12);
    let d = reconstruct_position(&st.u, [0.0; 3]).closure_defect;
    assert!(vec3::norm(vec3::sub(d, [0.0, 0.0, psi.cos()])) < 1e-15);
    let great = make_latitude(32, PI / 2.0).unwrap();
    assert!(vec3::norm(great.u.mean_vector()) < 1e-15);
    assert!(make_latitude(32, 0.0).is_err());
    assert!(make_latitude(32, PI).is_err());

    let moving = make_latitude_moving(32, psi, doubling_rate(psi)).unwrap();
    let mv = moving.v.mean_vector();
    assert!(vec3::norm(vec3::sub(mv, [0.0, 0.0, psi.cos()])) < 1e-15);
}

#[test]
fn perturbed_circles() {
    let c = make_perturbed_circle(32, 0.0, 3, true, 1.0).unwrap();
    assert!((&c.u - &make_circle(32).unwrap().u).max_mode_abs() < 1e-16);
    let p = make_perturbed_circle(64, 0.01, 3, true, 1.0).unwrap();
    assert!(torsion(&p.u).unwrap().0.max_mode_abs() < 1e-12);
    assert!(vec3::norm(p.v.mean_vector()) < 1e-15);
    assert!(vec3::norm(p.u.mean_vector()) < 1e-15);
    let q = make_perturbed_circle(64, 0.01, 2, false, 1.0).unwrap();
    let (theta, _) = torsion(&q.u).unwrap();
    assert!(theta.max_mode_abs() > 1e-4);
    assert!(vec3::norm(q.v.mean_vector()) < 1e-15);
    assert!(make_perturbed_circle(32, 0.2, 3, true, 1.0).is_err());
    assert!(make_perturbed_circle(32, 0.01, 9, true, 1.0).is_err());
}

#[test]
fn random_curves_are_closed_unit_and_deterministic() {
    for seed in 0..5 {
        let a = random_closed_curve(64, seed, 0.4, 2, 1.0, false).unwrap();
        let b = random_closed_curve(64, seed, 0.4, 2, 1.0, false).unwrap();
        assert_eq!(a, b);
        assert!(vec3::norm(a.mean_vector()) < 1e-12, "{:?}", a.mean_vector());
        let u1 = random_velocity(&a, seed, 0.1, false).unwrap();
        let r = check_compatibility(&a, &u1);
        assert!(r.unit_defect < 1e-10 && r.orthogonality_defect < 1e-10, "{r:?}");
    }
    for seed in 0..50 {
        Scenario::build(ensemble_member(seed, seed % 2 == 0), ENSEMBLE_GRID).unwrap();
    }
    let p = random_closed_curve(64, 7, 0.4, 2, 1.0, true).unwrap();
    assert!(p.component(2).max_mode_abs() == 0.0);
}
