//! Fixed inputs shared by the benchmarks.

use elastica_core::dynamics::HasimotoSample;
use elastica_core::geometry::CurveState;
use elastica_core::scenario::{Scenario, ScenarioSpec};

/// The 3D perturbed circle (`ε = 0.01`, `m = 2`) on `grid` points.
pub fn curve(grid: usize) -> CurveState {
    let spec = ScenarioSpec::PerturbedCircle {
        eps: 0.01,
        mode: 2,
        planar: false,
        speed: 1.0,
    };
    Scenario::build(spec, grid).expect("fixture resolves on benchmark grids").initial
}

pub fn hasimoto(grid: usize) -> HasimotoSample {
    HasimotoSample::from_curve(&curve(grid)).expect("fixture transforms")
}

pub const GRIDS: [usize; 2] = [32, 64];
