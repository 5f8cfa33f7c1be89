use elastica_bench::{curve, hasimoto, GRIDS};

#[test]
fn fixtures_build_on_every_grid() {
    for n in GRIDS {
        assert_eq!(curve(n).grid(), n);
        let h = hasimoto(n);
        assert!(h.state.beta.abs() < 0.5 && h.curve().is_ok());
    }
}
