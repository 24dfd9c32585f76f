//! Randomised structural invariants, 1000 cases each.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use jm3body::analysis::{power_sums, singular_distance, B_BOUND, ZETA};
use jm3body::coords::{hopf_from_rescaled, jacobi_from_positions, positions_from_jacobi, rescaled_from_hopf};
use jm3body::curvature::{oneill_residual, riemann, scalar_closed_form, OneillPlane};
use jm3body::metrics::finite_difference_dg;
use jm3body::stability::stability_tensor;
use jm3body::{ChartPoint, JmMetric, MassConfig, MetricField, PlanarConfig, PotentialKind, Space, Vec4, C64};
use proptest::prelude::*;

const COMBOS: [(Space, PotentialKind); 6] = [
    (Space::C2, PotentialKind::InverseSquare),
    (Space::R3, PotentialKind::InverseSquare),
    (Space::S3, PotentialKind::InverseSquare),
    (Space::S2, PotentialKind::InverseSquare),
    (Space::C2, PotentialKind::Newtonian),
    (Space::R3, PotentialKind::Newtonian),
];

fn config() -> ProptestConfig {
    ProptestConfig { cases: 1000, ..ProptestConfig::default() }
}

fn complex() -> impl Strategy<Value = C64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| C64::new(a, b))
}

fn masses() -> impl Strategy<Value = MassConfig> {
    (0.2..5.0f64, 0.2..5.0f64, 0.2..5.0f64, 0.5..2.0f64).prop_map(|(a, b, c, g)| MassConfig::new(a, b, c, g).unwrap())
}

/// A metric and a point inside its Hill region, at least 0.1 from collisions and chart edges.
#[derive(Debug, Clone, Copy)]
struct Sample {
    metric: JmMetric,
    point: ChartPoint,
}

fn sample() -> impl Strategy<Value = Sample> {
    sample_from(&COMBOS)
}

fn sample_from(combos: &'static [(Space, PotentialKind)]) -> impl Strategy<Value = Sample> {
    (0..combos.len(), 0.1..FRAC_PI_2 - 0.1, 0.0..PI, 0.5..2.0f64, 0.0..TAU, -0.3..1.0f64)
        .prop_filter("away from singular loci", |&(_, eta, xi2, ..)| singular_distance(eta, xi2) >= 0.1)
        .prop_filter_map("inside the Hill region", |(k, eta, xi2, r, xi1, e)| {
            let (space, potential) = combos[k];
            let energy = if space.has_radius() { e } else { 0.0 };
            let metric = JmMetric::new(space, potential, energy, MassConfig::default()).ok()?;
            let point = ChartPoint { space, r, eta, xi1, xi2 };
            metric.components(&point.coords()).ok()?;
            Some(Sample { metric, point })
        })
}

fn vector() -> impl Strategy<Value = Vec4> {
    prop::array::uniform4(-1.0..1.0f64).prop_filter("nonzero", |v| v.iter().map(|c| c * c).sum::<f64>() > 1e-3)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn hopf_round_trip(z1 in complex(), z2 in complex()) {
        prop_assume!(z1.norm() > 1e-3 && z2.norm() > 1e-3);
        let p = hopf_from_rescaled(z1, z2).unwrap();
        let (w1, w2) = rescaled_from_hopf(&p);
        let scale = z1.norm().hypot(z2.norm());
        prop_assert!((w1 - z1).norm() / scale < 1e-12 && (w2 - z2).norm() / scale < 1e-12);
    }

    #[test]
    fn jacobi_round_trip(a in complex(), b in complex(), c in complex(), mc in masses()) {
        let cfg = PlanarConfig::new(a, b, c);
        let back = positions_from_jacobi(&jacobi_from_positions(&cfg, &mc), &mc);
        let scale = cfg.x.iter().map(|x| x.norm()).fold(1.0, f64::max);
        for i in 0..3 {
            prop_assert!((back.x[i] - cfg.x[i]).norm() / scale < 1e-12);
        }
    }

    #[test]
    fn metric_derivatives_match_differences(s in sample()) {
        let x = s.point.coords();
        let c = s.metric.components(&x).unwrap();
        let fd = finite_difference_dg(&s.metric, &x, 1e-5).unwrap();
        let d = s.metric.dim();
        let (mut err, mut scale) = (0.0f64, 0.0f64);
        for (exact, approx) in c.dg.iter().zip(&fd).take(d) {
            for (er, ar) in exact.iter().zip(approx).take(d) {
                for (e, a) in er.iter().zip(ar).take(d) {
                    err = err.max((e - a).abs());
                    scale = scale.max(e.abs());
                }
            }
        }
        prop_assert!(err <= 1e-7 * scale, "{err} vs {scale}");
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn riemann_symmetries_and_bianchi(s in sample()) {
        let c = riemann(&s.metric, &s.point.coords()).unwrap();
        let d = c.dim();
        let low = &c.lowered;
        let mut worst = 0.0f64;
        for l in 0..d {
            for k in 0..d {
                for i in 0..d {
                    for j in 0..d {
                        let r = low[l][k][i][j];
                        worst = worst.max((r + low[l][k][j][i]).abs());
                        worst = worst.max((r + low[k][l][i][j]).abs());
                        worst = worst.max((r - low[i][j][l][k]).abs());
                    }
                }
            }
        }
        prop_assert!(worst < 1e-5, "pair symmetry {worst}");
        prop_assert!(c.bianchi_residual() < 1e-5);
        let sum = c.sectional_sum().unwrap();
        prop_assert!((sum - c.scalar).abs() < 1e-5, "{sum} vs {}", c.scalar);
    }

    #[test]
    fn stability_tensor_is_self_adjoint_and_kills_velocity(s in sample(), v in vector()) {
        let rep = stability_tensor(&s.metric, &s.point.coords(), &v).unwrap();
        prop_assert!(rep.zero_mode_residual < 1e-8, "{}", rep.zero_mode_residual);
        let scale = 1.0 + rep.eigenvalues.iter().fold(0.0f64, |m, e| m.max(e.abs()));
        prop_assert!(rep.symmetry_residual < 1e-8 * scale, "{}", rep.symmetry_residual);
        prop_assert!(rep.kappa_residual < 1e-8 * scale, "{}", rep.kappa_residual);
    }

    #[test]
    fn oneill_holds_for_c2_submersions(s in sample_from(&[COMBOS[0], COMBOS[4]])) {
        for plane in OneillPlane::ALL {
            let metric = if plane.base() == Space::S3 {
                JmMetric::standard(Space::C2, PotentialKind::InverseSquare).unwrap()
            } else {
                s.metric
            };
            let r = oneill_residual(&metric, &s.point, plane).unwrap();
            prop_assert!(r.residual.abs() < 1e-5 * (1.0 + r.k_base.abs()), "{r:?}");
        }
    }

    #[test]
    fn conformal_bounds_and_curvature_chain(eta in 0.01..FRAC_PI_2, xi2 in 0.0..PI) {
        prop_assume!(singular_distance(eta, xi2) >= 1e-2);
        let ps = power_sums(eta, xi2).unwrap();
        prop_assert!(ps.h() >= 3.0 - 1e-12);
        prop_assert!(ps.a >= 17.0 / 27.0 - 1e-12);
        prop_assert!(ps.b > B_BOUND);
        prop_assert!(ps.zeta_ratio > ZETA);
        let r = |space: Space| {
            let m = JmMetric::standard(space, PotentialKind::InverseSquare).unwrap();
            scalar_closed_form(&m, &ChartPoint { space, r: 1.0, eta, xi1: 0.0, xi2 }).unwrap()
        };
        let (s2, r3, s3, c2) = (r(Space::S2), r(Space::R3), r(Space::S3), r(Space::C2));
        prop_assert!(0.0 >= s2 - 1e-12 && s2 > r3 && r3 >= s3 - 1e-12 && s3 > c2, "{s2} {r3} {s3} {c2}");
    }
}
