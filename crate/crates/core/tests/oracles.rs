//! Library output against independently built references: metrics pulled
//! back from body positions, potentials summed over pairs, Jacobi vectors by
//! hand and round-sphere curvature.

use approx::assert_relative_eq;
use jm3body::coords::{jacobi_from_positions, rescaled_from_hopf};
use jm3body::curvature::riemann;
use jm3body::dynamics::potential;
use jm3body::{ChartPoint, JmMetric, MassConfig, MetricField, PlanarConfig, PotentialKind, Space, C64};

fn positions(q: &[f64; 4], mc: &MassConfig) -> PlanarConfig {
    let (z1, z2) = rescaled_from_hopf(&ChartPoint::c2(q[0], q[1], q[2], q[3]));
    PlanarConfig::from_rescaled(z1, z2, C64::new(0.0, 0.0), mc)
}

/// `sum_a m_a <d_i x_a, d_j x_a>` by five-point differences of the positions.
fn mass_metric(q: &[f64; 4], mc: &MassConfig) -> [[f64; 4]; 4] {
    let h = 1e-4;
    let d = |i: usize| -> [C64; 3] {
        let at = |s: f64| {
            let mut y = *q;
            y[i] += s * h;
            positions(&y, mc).x
        };
        let (p2, p1, m1, m2) = (at(2.0), at(1.0), at(-1.0), at(-2.0));
        std::array::from_fn(|a| (-p2[a] + 8.0 * p1[a] - 8.0 * m1[a] + m2[a]) / (12.0 * h))
    };
    let grads: Vec<[C64; 3]> = (0..4).map(d).collect();
    let m = mc.masses();
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|a| m[a] * (grads[i][a].conj() * grads[j][a]).re).sum()))
}

fn pair_potential(cfg: &PlanarConfig, mc: &MassConfig, potential: PotentialKind) -> f64 {
    let m = mc.masses();
    let n = match potential {
        PotentialKind::InverseSquare => 2,
        PotentialKind::Newtonian => 1,
    };
    [(0, 1), (1, 2), (0, 2)].iter().map(|&(a, b)| -mc.g * m[a] * m[b] / (cfg.x[a] - cfg.x[b]).norm().powi(n)).sum()
}

#[test]
fn jm_metric_is_pulled_back_mass_metric() {
    let masses = [
        MassConfig::default(),
        MassConfig::new(1.0, 2.0, 3.0, 1.0).unwrap(),
        MassConfig::new(0.5, 1.5, 0.8, 2.0).unwrap(),
    ];
    let points = [[1.0, 0.7, 0.3, 0.9], [0.6, 0.4, 2.0, 2.5], [1.7, 1.1, -0.8, 0.2]];
    for mc in &masses {
        for kind in [PotentialKind::InverseSquare, PotentialKind::Newtonian] {
            for q in &points {
                let cfg = positions(q, mc);
                let energy = 0.4;
                let m = JmMetric::new(Space::C2, kind, energy, *mc).unwrap();
                let (v, _) = potential(&m, q).unwrap();
                assert_relative_eq!(v, pair_potential(&cfg, mc, kind), max_relative = 1e-12);
                let g = m.components(q).unwrap().g;
                let k = mass_metric(q, mc);
                for i in 0..4 {
                    for j in 0..4 {
                        assert_relative_eq!(g[i][j], (energy - v) * k[i][j], epsilon = 1e-8, max_relative = 1e-8);
                    }
                }
            }
        }
    }
}

#[test]
fn jacobi_vectors_by_hand() {
    let mc = MassConfig::new(1.0, 2.0, 3.0, 1.0).unwrap();
    let x = [C64::new(0.3, -1.0), C64::new(2.0, 0.5), C64::new(-0.7, 0.9)];
    let j = jacobi_from_positions(&PlanarConfig::new(x[0], x[1], x[2]), &mc);
    let j1 = x[1] - x[0];
    let j2 = x[2] - (x[0] + 2.0 * x[1]) / 3.0;
    let cm = (x[0] + 2.0 * x[1] + 3.0 * x[2]) / 6.0;
    for (a, b) in j.iter().zip([j1, j2, cm]) {
        assert_relative_eq!((a - b).norm(), 0.0, epsilon = 1e-14);
    }
}

#[test]
fn equal_masses_on_a_line() {
    let mc = MassConfig::default();
    let j = jacobi_from_positions(&PlanarConfig::new(C64::new(-0.5, 0.0), C64::new(0.5, 0.0), C64::new(0.0, 0.0)), &mc);
    assert_relative_eq!(j[0].re, 1.0);
    assert!(j[1].norm() < 1e-15 && j[2].norm() < 1e-15);
}

#[test]
fn constant_factor_gives_round_spheres() {
    // Kinetic S3 is the unit sphere (R = 6) and S2 its Hopf image of radius 1/2 (R = 8).
    for c in [1.0, 2.5] {
        let s2 = JmMetric::with_constant_conformal(Space::S2, c);
        let s3 = JmMetric::with_constant_conformal(Space::S3, c);
        for (eta, xi2) in [(0.4, 1.0), (1.2, 2.9)] {
            let r2 = riemann(&s2, &ChartPoint::s2(eta, xi2).coords()).unwrap().scalar;
            let r3 = riemann(&s3, &ChartPoint::s3(eta, 0.7, xi2).coords()).unwrap().scalar;
            assert_relative_eq!(r2, 8.0 / c, max_relative = 1e-8);
            assert_relative_eq!(r3, 6.0 / c, max_relative = 1e-8);
        }
    }
}

#[test]
fn constant_factor_cone_is_flat() {
    let m = JmMetric::with_constant_conformal(Space::C2, 3.0);
    let c = riemann(&m, &ChartPoint::c2(1.3, 0.6, 0.2, 1.1).coords()).unwrap();
    let worst = c.riemann.iter().flatten().flatten().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
    assert!(worst < 1e-7, "{worst}");
}
