//! Shared fixtures for the criterion benches.

use jm3body::analysis::GridSpec;
use jm3body::dynamics::lagrange_rotation;
use jm3body::{ChartPoint, FlowState, JmMetric, MassConfig, PotentialKind, Space};

/// Generic C2 point away from every collision.
pub fn c2_point() -> ChartPoint {
    ChartPoint::c2(1.1, 0.7, 0.3, 0.9)
}

pub fn c2_metric(potential: PotentialKind, energy: f64) -> JmMetric {
    JmMetric::new(Space::C2, potential, energy, MassConfig::default()).expect("valid metric")
}

pub fn small_grid() -> GridSpec {
    GridSpec::square(40).with_exclusion(1e-2)
}

/// Newtonian equal-mass Lagrange rotation at `r = 1`, its metric and period.
pub fn rotation() -> (JmMetric, FlowState, f64) {
    let (start, omega, energy) =
        lagrange_rotation(&MassConfig::default(), PotentialKind::Newtonian, 1.0).expect("rotation");
    (c2_metric(PotentialKind::Newtonian, energy), start, std::f64::consts::TAU / omega)
}
