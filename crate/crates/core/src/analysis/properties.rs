//! Seeded random checks of the structural invariants: chart round trips,
//! metric derivatives, curvature symmetries, Bianchi, scalar as a sum of
//! sectional curvatures, the stability zero mode and O'Neill's formula.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coords::{
    hopf_from_rescaled, jacobi_from_positions, positions_from_jacobi, rescaled_from_hopf, ChartPoint, MassConfig,
    PlanarConfig, Space, C64,
};
use crate::curvature::{oneill_residual, riemann, Curvature, OneillPlane};
use crate::error::Result;
use crate::linalg::{Vec4, ZERO_VEC};
use crate::metrics::{finite_difference_dg, JmMetric, MetricField, PotentialKind};
use crate::stability::stability_tensor;

use super::grid::singular_distance;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyResult {
    pub name: &'static str,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

struct Tally {
    name: &'static str,
    tolerance: f64,
    samples: usize,
    worst: f64,
    errors: usize,
}

impl Tally {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self { name, tolerance, samples: 0, worst: 0.0, errors: 0 }
    }

    fn record(&mut self, r: Result<f64>) {
        self.samples += 1;
        match r {
            Ok(v) if v.is_finite() => self.worst = self.worst.max(v),
            _ => self.errors += 1,
        }
    }

    fn finish(self) -> PropertyResult {
        PropertyResult {
            name: self.name,
            samples: self.samples,
            max_residual: self.worst,
            tolerance: self.tolerance,
            passed: self.errors == 0 && self.worst < self.tolerance,
        }
    }
}

const SPACES: [(Space, PotentialKind); 6] = [
    (Space::C2, PotentialKind::InverseSquare),
    (Space::R3, PotentialKind::InverseSquare),
    (Space::S3, PotentialKind::InverseSquare),
    (Space::S2, PotentialKind::InverseSquare),
    (Space::C2, PotentialKind::Newtonian),
    (Space::R3, PotentialKind::Newtonian),
];

/// Random metric and point inside its Hill region, away from collisions.
fn sample_metric(rng: &mut ChaCha8Rng, k: usize) -> (JmMetric, ChartPoint) {
    let (space, potential) = SPACES[k % SPACES.len()];
    loop {
        let energy = if space.has_radius() { rng.random_range(-0.3..1.0) } else { 0.0 };
        let m = JmMetric::new(space, potential, energy, MassConfig::default()).expect("valid combination");
        let eta = rng.random_range(0.05..FRAC_PI_2 - 0.05);
        let xi2 = rng.random_range(0.0..PI);
        if singular_distance(eta, xi2) < 0.05 {
            continue;
        }
        let p = ChartPoint { space, r: rng.random_range(0.5..2.0), eta, xi1: rng.random_range(0.0..TAU), xi2 };
        if m.components(&p.coords()).is_ok() {
            return (m, p);
        }
    }
}

fn random_vec(rng: &mut ChaCha8Rng, dim: usize) -> Vec4 {
    let mut v = ZERO_VEC;
    for c in v.iter_mut().take(dim) {
        *c = rng.random_range(-1.0..1.0);
    }
    v
}

fn max_riemann(c: &Curvature) -> f64 {
    c.riemann.iter().flatten().flatten().flatten().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Largest violation of `R_lkij = -R_lkji = -R_klij = R_ijlk` (all lowered).
fn symmetry_violation(c: &Curvature) -> f64 {
    let d = c.dim();
    let low = |l: usize, k: usize, i: usize, j: usize| c.lowered[l][k][i][j];
    let mut worst: f64 = 0.0;
    for l in 0..d {
        for k in 0..d {
            for i in 0..d {
                for j in 0..d {
                    let r = low(l, k, i, j);
                    worst = worst.max((r + low(l, k, j, i)).abs());
                    worst = worst.max((r + low(k, l, i, j)).abs());
                    worst = worst.max((r - low(i, j, l, k)).abs());
                }
            }
        }
    }
    worst
}

/// Runs every property over `samples` random points from `seed`.
pub fn run_property_suite(seed: u64, samples: usize) -> Vec<PropertyResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mc = MassConfig::default();

    let mut hopf = Tally::new("hopf-round-trip", 1e-12);
    let mut jac = Tally::new("jacobi-round-trip", 1e-12);
    let mut equi = Tally::new("equilateral-detector", 1e-12);
    let mut dg = Tally::new("metric-derivatives", 1e-7);
    let mut sym = Tally::new("riemann-symmetries", 1e-5);
    let mut bianchi = Tally::new("bianchi", 1e-5);
    let mut ssum = Tally::new("scalar-equals-sectional-sum", 1e-5);
    let mut zero = Tally::new("stability-zero-mode", 1e-8);
    let mut oneill = Tally::new("oneill", 1e-5);

    for k in 0..samples {
        // Chart round trips.
        let z1 = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let z2 = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        hopf.record(hopf_from_rescaled(z1, z2).map(|p| {
            let (w1, w2) = rescaled_from_hopf(&p);
            (w1 - z1).norm().max((w2 - z2).norm()) / z1.norm().hypot(z2.norm())
        }));
        let x: [C64; 3] = std::array::from_fn(|_| C64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)));
        let cfg = PlanarConfig::new(x[0], x[1], x[2]);
        let back = positions_from_jacobi(&jacobi_from_positions(&cfg, &mc), &mc);
        jac.record(Ok((0..3).map(|i| (back.x[i] - cfg.x[i]).norm()).fold(0.0, f64::max)));

        // A rotated, scaled, translated equilateral triangle lands on L4 or L5.
        let (rot, size) = (C64::from_polar(1.0, rng.random_range(0.0..TAU)), rng.random_range(0.1..3.0));
        let w = C64::from_polar(1.0, TAU / 3.0);
        let shift = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let tri = [C64::new(1.0, 0.0), w, w * w].map(|c| c * rot * size + shift);
        let cfg = PlanarConfig::new(tri[0], tri[1], tri[2]);
        let (a, b) = cfg.rescaled(&mc);
        equi.record(hopf_from_rescaled(a, b).map(|p| (p.eta - FRAC_PI_4).abs().max((p.xi2.abs() - FRAC_PI_4).abs())));

        // Metric and curvature.
        let (m, p) = sample_metric(&mut rng, k);
        let x = p.coords();
        let d = m.dim();
        dg.record(m.components(&x).and_then(|c| {
            let fd = finite_difference_dg(&m, &x, 1e-5)?;
            let (mut worst, mut scale) = (0.0f64, 0.0f64);
            for a in 0..d {
                for i in 0..d {
                    for j in 0..d {
                        worst = worst.max((c.dg[a][i][j] - fd[a][i][j]).abs());
                        scale = scale.max(c.dg[a][i][j].abs());
                    }
                }
            }
            Ok(worst / scale.max(f64::MIN_POSITIVE))
        }));
        match riemann(&m, &x) {
            Ok(c) => {
                let scale = 1.0 + max_riemann(&c);
                sym.record(Ok(symmetry_violation(&c) / scale));
                bianchi.record(Ok(c.bianchi_residual() / scale));
                ssum.record(c.sectional_sum().map(|s| (s - c.scalar).abs() / (1.0 + c.scalar.abs())));
            }
            Err(e) => {
                for t in [&mut sym, &mut bianchi, &mut ssum] {
                    t.record(Err(e.clone()));
                }
            }
        }
        let v = random_vec(&mut rng, d);
        zero.record(stability_tensor(&m, &x, &v).map(|r| r.zero_mode_residual));

        if m.space == Space::C2 {
            for plane in OneillPlane::ALL {
                let allowed =
                    plane.base() == Space::R3 || (m.potential == PotentialKind::InverseSquare && m.energy == 0.0);
                if allowed {
                    oneill.record(oneill_residual(&m, &p, plane).map(|r| r.residual.abs() / (1.0 + r.k_base.abs())));
                }
            }
            // Zero-energy inverse-square sample so the S3 planes are exercised too.
            if m.potential == PotentialKind::InverseSquare {
                let m0 = JmMetric::standard(Space::C2, PotentialKind::InverseSquare).expect("standard metric");
                for plane in [OneillPlane::EtaXi2, OneillPlane::EtaXi1, OneillPlane::Xi1Xi2] {
                    oneill.record(oneill_residual(&m0, &p, plane).map(|r| r.residual.abs() / (1.0 + r.k_base.abs())));
                }
            }
        }
    }
    [hopf, jac, equi, dg, sym, bianchi, ssum, zero, oneill].into_iter().map(Tally::finish).collect()
}
