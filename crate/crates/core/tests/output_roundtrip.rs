use elastica_core::dynamics::{evolve_hasimoto, EvolveOptions, HasimotoSample};
use elastica_core::output::{diagnostics_table, format_float, trajectory_table, Format, Table, TRAJECTORY_COLUMNS};
use elastica_core::scenario::{make_latitude, Scenario, ScenarioSpec};

fn sample_tables() -> (Table, Table) {
    let sc = Scenario::build(ScenarioSpec::standard_planar(), 32).unwrap();
    let h = HasimotoSample::from_curve(&sc.initial).unwrap();
    let tr = evolve_hasimoto(&h, 0.004, 1e-3, &EvolveOptions { sample_every: 2, ..Default::default() }).unwrap();
    let curves: Vec<_> = tr.states.iter().map(|s| s.curve().unwrap()).collect();
    let traj = trajectory_table(tr.times.iter().cloned().zip(curves.iter())).unwrap();
    (traj, diagnostics_table(&tr.diagnostics))
}

fn same_bits(a: &Table, b: &Table) -> bool {
    a.columns == b.columns
        && a.rows.len() == b.rows.len()
        && a.rows.iter().zip(&b.rows).all(|(x, y)| {
            x.len() == y.len() && x.iter().zip(y).all(|(p, q)| p.to_bits() == q.to_bits() || (p.is_nan() && q.is_nan()))
        })
}

#[test]
fn tables_round_trip_bit_exactly() {
    let (traj, diag) = sample_tables();
    assert_eq!(traj.rows.len(), 3 * 32);
    assert_eq!(diag.rows.len(), 3);
    for format in [Format::Csv, Format::Json] {
        for t in [&traj, &diag] {
            let text = t.render(format).unwrap();
            let back = Table::parse(&text, format).unwrap();
            assert!(same_bits(t, &back), "{format}");
            assert_eq!(back.render(format).unwrap(), text);
        }
    }
}

#[test]
fn floats_use_seventeen_significant_digits() {
    assert_eq!(format_float(0.1), "1.0000000000000001e-1");
    assert_eq!(format_float(-2.0), "-2.0000000000000000e0");
    assert_eq!(format_float(f64::NAN), "NaN");
    for x in [std::f64::consts::PI, 1e-300, 5e-324, f64::MAX] {
        assert_eq!(format_float(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
    }
}

#[test]
fn latitude_rows_carry_curvature_and_torsion() {
    let c = make_latitude(16, std::f64::consts::FRAC_PI_3).unwrap();
    let t = trajectory_table([(0.0, &c)]).unwrap();
    assert_eq!(t.columns, TRAJECTORY_COLUMNS);
    let (s3, c3) = std::f64::consts::FRAC_PI_3.sin_cos();
    assert!(t.column("kappa").unwrap().iter().all(|k| (k - s3).abs() < 1e-12));
    assert!(t.column("theta").unwrap().iter().all(|th| (th - c3).abs() < 1e-12));
}

#[test]
fn files_round_trip() {
    let (_, diag) = sample_tables();
    let dir = tempfile::tempdir().unwrap();
    for format in [Format::Csv, Format::Json] {
        let path = dir.path().join(format!("diag.{}", format.extension()));
        diag.write(&path, format).unwrap();
        assert!(same_bits(&diag, &Table::read(&path, format).unwrap()));
    }
    assert!("yaml".parse::<Format>().is_err());
}
