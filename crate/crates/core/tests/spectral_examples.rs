use elastica_core::spectral::*;
use elastica_core::ElasticaError;
use num_complex::Complex64;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn r(x: f64) -> SobolevIndex {
    SobolevIndex::new(x).unwrap()
}

/// Direct O(N²) DFT with mean normalization.
fn dft_oracle(samples: &[Complex64]) -> Vec<Complex64> {
    let n = samples.len();
    (0..n)
        .map(|k| {
            let kk = wavenumber(k, n) as f64;
            samples
                .iter()
                .enumerate()
                .map(|(j, &x)| x * Complex64::from_polar(1.0, -kk * 2.0 * PI * j as f64 / n as f64))
                .sum::<Complex64>()
                / n as f64
        })
        .collect()
}

#[test]
fn constant_and_pure_mode() {
    let one = PeriodicField::from_real_fn(16, |_| 1.0).unwrap();
    assert!((one.mode(0) - c(1.0, 0.0)).norm() < 1e-15);
    assert!(one.modes()[1..].iter().all(|m| m.norm() < 1e-15));

    let e1 = PeriodicField::from_fn(16, |s| Complex64::from_polar(1.0, s)).unwrap();
    for n in -8..8 {
        let expected = if n == 1 { 1.0 } else { 0.0 };
        assert!((e1.mode(n) - c(expected, 0.0)).norm() < 1e-14, "n = {n}");
    }
}

#[test]
fn rejects_non_power_of_two() {
    let samples = vec![c(1.0, 0.0); 12];
    assert_eq!(
        PeriodicField::transform_to_modes(&samples),
        Err(ElasticaError::NonPowerOfTwo(12))
    );
}

#[test]
fn transform_matches_direct_dft_and_round_trips() {
    let n = 32;
    let samples: Vec<Complex64> = grid_points(n)
        .into_iter()
        .map(|s| c((s.sin() * 2.0).exp(), (3.0 * s).cos() / (2.0 + s.cos())))
        .collect();
    let f = PeriodicField::transform_to_modes(&samples).unwrap();
    let oracle = dft_oracle(&samples);
    for (a, b) in f.modes().iter().zip(&oracle) {
        assert!((a - b).norm() < 1e-13);
    }
    let back = f.samples();
    let scale = samples.iter().map(|x| x.norm()).fold(0.0, f64::max);
    for (a, b) in back.iter().zip(&samples) {
        assert!((a - b).norm() / scale < 1e-12);
    }
}

#[test]
fn derivative_examples() {
    let e1 = PeriodicField::from_fn(16, |s| Complex64::from_polar(1.0, s)).unwrap();
    let d = e1.differentiate(1, 0.0);
    assert!((d.mode(1) - c(0.0, 1.0)).norm() < 1e-14);

    let one = PeriodicField::constant(16, c(1.0, 0.0)).unwrap();
    let d = one.differentiate(1, 0.5);
    assert!((d.mode(0) - c(0.0, 0.5)).norm() < 1e-15);

    let sine = PeriodicField::from_real_fn(16, f64::sin).unwrap();
    let d4 = sine.differentiate(4, 0.0);
    // round-off in the empty modes is amplified by n⁴
    for (a, b) in d4.samples().iter().zip(sine.samples()) {
        assert!((a - b).norm() < 1e-11);
    }
}

#[test]
fn derivative_composition_is_exact() {
    let f = PeriodicField::from_fn(16, |s| c(s.cos().exp(), (2.0 * s).sin())).unwrap();
    for beta in [0.0, 0.3, -0.5] {
        let two_step = f.differentiate(1, beta).differentiate(2, beta);
        let one_step = f.differentiate(3, beta);
        for (a, b) in two_step.modes().iter().zip(one_step.modes()) {
            assert!((a - b).norm() <= 1e-15 * (1.0 + b.norm()));
        }
    }
}

#[test]
fn sobolev_norm_examples() {
    let one = PeriodicField::constant(16, c(1.0, 0.0)).unwrap();
    for x in [0.0, 1.0, 2.5] {
        assert!((one.sobolev_norm(r(x)) - 1.0).abs() < 1e-15);
    }
    let e1 = PeriodicField::from_fn(16, |s| Complex64::from_polar(1.0, s)).unwrap();
    assert!((e1.sobolev_norm(r(1.0)) - 2f64.sqrt()).abs() < 1e-14);

    let f = PeriodicField::from_fn(16, |s| c(1.0, 0.0) + Complex64::from_polar(1.0, 2.0 * s)).unwrap();
    // direct sum: 1 + (1+4)^2 = 26
    assert!((f.sobolev_norm(r(2.0)) - 26f64.sqrt()).abs() < 1e-13);
    assert!(SobolevIndex::new(-1.0).is_err());
}

#[test]
fn y_norm_examples() {
    let zero = PeriodicField::zeros(16, 1).unwrap();
    let one = PeriodicField::constant(16, c(1.0, 0.0)).unwrap();
    let e1 = PeriodicField::from_fn(16, |s| Complex64::from_polar(1.0, s)).unwrap();
    assert_eq!(y_norm(&zero, &zero, r(0.0)), 0.0);
    assert!((y_norm(&one, &zero, r(0.0)) - 1.0).abs() < 1e-15);
    assert!((y_norm(&zero, &e1, r(0.0)) - 2f64.sqrt()).abs() < 1e-14);
}

#[test]
fn multiply_examples() {
    let e1 = PeriodicField::from_fn(16, |s| Complex64::from_polar(1.0, s)).unwrap();
    let sq = e1.multiply(&e1).unwrap();
    assert!((sq.mode(2) - c(1.0, 0.0)).norm() < 1e-14);
    let one = PeriodicField::constant(16, c(1.0, 0.0)).unwrap();
    let f = PeriodicField::from_fn(16, |s| c(s.sin(), (3.0 * s).cos())).unwrap();
    let g = f.multiply(&one).unwrap();
    for (a, b) in g.modes().iter().zip(f.modes()) {
        assert!((a - b).norm() < 1e-14);
    }
}

#[test]
fn multiply_matches_convolution_oracle() {
    // band-limited to |n| <= 5 so the truncated convolution is the full product
    let n = 32;
    let mk = |seed: f64| {
        let mut m = vec![c(0.0, 0.0); n];
        for k in -5i64..=5 {
            let x = (seed * (k as f64 + 7.3)).sin();
            let y = (seed * (k as f64 * 1.7 + 0.2)).cos();
            m[slot(k, n)] = c(x, y) / (1.0 + (k * k) as f64);
        }
        PeriodicField::from_modes(n, 1, m).unwrap()
    };
    let f = mk(1.3);
    let g = mk(2.9);
    let prod = f.multiply(&g).unwrap();
    for k in -15i64..16 {
        let mut expect = c(0.0, 0.0);
        for a in -5i64..=5 {
            expect += f.mode(a) * g.mode(k - a);
        }
        assert!((prod.mode(k) - expect).norm() < 1e-14, "mode {k}");
    }
}

#[test]
fn parseval_against_padded_quadrature() {
    let f = PeriodicField::from_fn(32, |s| c((s.cos()).exp(), (2.0 * s).sin())).unwrap();
    let len = padded_len(32);
    let quad: f64 = f.samples_on(len).iter().map(|x| x.norm_sqr()).sum::<f64>() / len as f64;
    let norm2 = f.sobolev_norm(r(0.0)).powi(2);
    assert!((quad - norm2).abs() / norm2 < 1e-10);
}

#[test]
fn antiderivative_inverts_derivative_on_mean_free() {
    let f = PeriodicField::from_real_fn(16, |s| s.sin() + (3.0 * s).cos()).unwrap();
    let back = f.antiderivative().differentiate(1, 0.0);
    for (a, b) in back.modes().iter().zip(f.modes()) {
        assert!((a - b).norm() < 1e-14);
    }
}

mod props {
    use super::*;
    use proptest::prelude::*;

    fn field(n: usize) -> impl Strategy<Value = PeriodicField> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n).prop_map(move |v| {
            let mut modes: Vec<Complex64> = v.into_iter().map(|(a, b)| c(a, b)).collect();
            // keep the top quarter empty so products are smooth
            for (j, m) in modes.iter_mut().enumerate() {
                if wavenumber(j, n).abs() > (n / 4) as i64 {
                    *m = c(0.0, 0.0);
                }
            }
            PeriodicField::from_modes(n, 1, modes).unwrap()
        })
    }

    proptest! {
        #[test]
        fn multiply_commutes_and_is_bilinear(f in field(16), g in field(16), h in field(16), a in -2.0f64..2.0) {
            let fg = f.multiply(&g).unwrap();
            let gf = g.multiply(&f).unwrap();
            for (x, y) in fg.modes().iter().zip(gf.modes()) {
                prop_assert!((x - y).norm() < 1e-13);
            }
            let lhs = (f.clone() * a + h.clone()).multiply(&g).unwrap();
            let rhs = fg * a + h.multiply(&g).unwrap();
            for (x, y) in lhs.modes().iter().zip(rhs.modes()) {
                prop_assert!((x - y).norm() < 1e-12);
            }
        }

        #[test]
        fn samples_round_trip(f in field(32)) {
            let back = PeriodicField::transform_to_modes(&f.samples()).unwrap();
            for (x, y) in back.modes().iter().zip(f.modes()) {
                prop_assert!((x - y).norm() < 1e-13);
            }
        }
    }
}
