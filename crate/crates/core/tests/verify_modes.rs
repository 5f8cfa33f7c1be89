use elastica_core::verify::{run_check, verify, VerifyOptions};

#[test]
fn flipped_cubic_term_fails_the_energy_check() {
    let opts = VerifyOptions {
        mutation: true,
        ..Default::default()
    };
    let check = run_check(6, &opts);
    println!("{check}");
    assert!(!check.passed);
    let drift = check.measurements.iter().find(|m| m.label.contains("energy")).unwrap();
    assert!(!drift.passed(), "{drift}");
}

#[test]
fn coarse_grid_passes_the_same_criteria() {
    let coarse = verify(&VerifyOptions {
        grid: 32,
        ..Default::default()
    });
    println!("{coarse}");
    let fine = verify(&VerifyOptions::default());
    assert_eq!(coarse.passed_set(), fine.passed_set());
}

#[test]
fn unknown_criterion_is_reported_as_failure() {
    let c = run_check(12, &VerifyOptions::default());
    assert!(!c.passed && c.error.is_some());
}
