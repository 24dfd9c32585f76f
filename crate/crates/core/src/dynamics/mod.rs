//! Trajectories, JM geodesics, and the solutions and probes built on them.

mod flow;
mod integrator;
mod probes;
mod solutions;

pub use flow::{
    compare_trajectory_geodesic, flow, flow_with_rules, geodesic_rhs, potential, reparam_sigma, trajectory_rhs,
    uniform_clocks, FlowKind, FlowState, PathRecord, StopRules,
};
pub use integrator::{integrate, Event, Solution, StepStats, StopStatus, Tolerances};
pub use probes::{collision_distance_probe, LengthSample, ProbeTarget};
pub use solutions::{
    homothety_collision_time, homothety_collision_time_zero_energy, lagrange_homothety, lagrange_jacobi_residual,
    lagrange_rotation, log_slope, radial_curve_residual, radial_infall, RadialInfall,
};

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_4, PI};

    use super::*;
    use crate::coords::{permute_bodies, shape_cartesian, special_point, ChartPoint, MassConfig, Space, SpecialPoint};
    use crate::linalg::{inner, ZERO_VEC};
    use crate::metrics::{
        kinetic_metric, JmMetric, NearCollisionKind, NearCollisionMetric, PotentialKind, PowerLawProbe,
    };

    const ISQ: PotentialKind = PotentialKind::InverseSquare;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn metric(potential: PotentialKind, energy: f64) -> JmMetric {
        JmMetric::new(Space::C2, potential, energy, MassConfig::default()).unwrap()
    }

    #[test]
    fn rotation_keeps_shape_for_one_period() {
        for pot in [ISQ, PotentialKind::Newtonian] {
            let (start, omega, e) = lagrange_rotation(&MassConfig::default(), pot, 1.0).unwrap();
            let m = metric(pot, e);
            let period = 2.0 * PI / omega;
            let path = flow(&m, &start, &uniform_clocks(period, 40), &tol()).unwrap();
            assert_eq!(path.status, StopStatus::Completed);
            for s in &path.samples {
                let p = s.point;
                assert!((p.r - 1.0).abs() < 1e-8 && (p.eta - FRAC_PI_4).abs() < 1e-8);
                assert!((p.xi2 - FRAC_PI_4).abs() < 1e-8);
            }
            assert!((path.last().point.xi1 - 2.0 * PI).abs() < 1e-8);
            if pot == PotentialKind::Newtonian {
                assert!((omega - 3f64.sqrt()).abs() < 1e-12 && (e + 1.5).abs() < 1e-12);
            } else {
                assert!(e.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sigma_constant_on_rotation() {
        let (start, _, e) = lagrange_rotation(&MassConfig::default(), PotentialKind::Newtonian, 1.0).unwrap();
        let m = metric(PotentialKind::Newtonian, e);
        let path = flow(&m, &start, &uniform_clocks(1.0, 5), &tol()).unwrap();
        let s0 = reparam_sigma(&m, &FlowState { kind: FlowKind::Geodesic, ..path.samples[0] }).unwrap();
        for s in &path.samples {
            let s1 = reparam_sigma(&m, &FlowState { kind: FlowKind::Geodesic, ..*s }).unwrap();
            assert!((s1 - s0).abs() < 1e-9);
        }
    }

    #[test]
    fn sigma_at_unit_speed() {
        // T = 1/2 gives sigma = sqrt(2) (E - V).
        let m = metric(ISQ, 0.5);
        let p = special_point(SpecialPoint::L4);
        let phi = m.conformal_factor(&p.coords()).unwrap().0;
        let mut v = ZERO_VEC;
        v[0] = 1.0 / phi.sqrt();
        let s = reparam_sigma(&m, &FlowState::geodesic(p, v)).unwrap();
        assert!((s - 2f64.sqrt() * phi).abs() < 1e-12);
        assert!((phi - 3.5).abs() < 1e-12);
    }

    #[test]
    fn homothety_stays_radial() {
        for pot in [ISQ, PotentialKind::Newtonian] {
            let (start, e) = lagrange_homothety(&MassConfig::default(), pot, 1.0, 0.3).unwrap();
            let m = metric(pot, e);
            let path = flow(&m, &start, &uniform_clocks(0.2, 10), &tol()).unwrap();
            for s in &path.samples {
                assert!((s.point.eta - FRAC_PI_4).abs() < 1e-10 && (s.point.xi2 - FRAC_PI_4).abs() < 1e-10);
            }
            assert!(path.max_drift() < 1e-9);
        }
    }

    #[test]
    fn flat_chart_geodesics_are_straight() {
        let m = JmMetric::with_constant_conformal(Space::C2, 1.0);
        let p = ChartPoint::c2(1.0, 0.6, 0.2, 0.4);
        let v = [0.3, -0.2, 0.5, 0.1];
        let path = flow(&m, &FlowState::geodesic(p, v), &uniform_clocks(1.0, 4), &tol()).unwrap();
        let z = |q: &ChartPoint| crate::coords::rescaled_from_hopf(q);
        let (a0, b0) = z(&path.samples[0].point);
        let (a1, b1) = z(&path.samples[2].point);
        let (a2, b2) = z(&path.samples[4].point);
        // Equal parameter steps give equal displacements along a line.
        assert!(((a2 - a1) - (a1 - a0)).norm() < 1e-8 && ((b2 - b1) - (b1 - b0)).norm() < 1e-8);
    }

    #[test]
    fn geodesic_conserves_kinetic_t() {
        let m = metric(ISQ, 0.7);
        let p = ChartPoint::c2(1.3, 0.6, 0.4, 1.0);
        let v = [0.2, 0.1, -0.3, 0.25];
        let path = flow(&m, &FlowState::geodesic(p, v), &uniform_clocks(2.0, 8), &tol()).unwrap();
        assert_eq!(path.status, StopStatus::Completed);
        assert!(path.max_drift() < 2e-9, "{}", path.max_drift());
    }

    #[test]
    fn round_sphere_geodesics_are_great_circles() {
        let m = JmMetric::with_constant_conformal(Space::S2, 1.0);
        let p = ChartPoint::s2(0.7, 0.4);
        let path = flow(&m, &FlowState::geodesic(p, [0.3, 0.5, 0.0, 0.0]), &uniform_clocks(1.5, 6), &tol()).unwrap();
        let w = |q: &ChartPoint| shape_cartesian(q);
        let (a, b) = (w(&path.samples[0].point), w(&path.samples[1].point));
        let n = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
        for s in &path.samples {
            let c = w(&s.point);
            assert!((n[0] * c[0] + n[1] * c[1] + n[2] * c[2]).abs() < 1e-9);
        }
    }

    fn radial_geodesic_drift(p: ChartPoint) -> f64 {
        let m = metric(ISQ, 0.0);
        let path = flow(&m, &FlowState::geodesic(p, [0.5, 0.0, 0.0, 0.0]), &uniform_clocks(1.0, 5), &tol()).unwrap();
        assert_eq!(path.status, StopStatus::Completed);
        path.samples
            .iter()
            .map(|s| (s.point.eta - p.eta).abs().max((s.point.xi2 - p.xi2).abs()).max((s.point.xi1 - p.xi1).abs()))
            .fold(0.0, f64::max)
    }

    #[test]
    fn radial_curves_at_central_configurations_are_geodesics() {
        for label in [SpecialPoint::L4, SpecialPoint::L5, SpecialPoint::E1, SpecialPoint::E2] {
            assert!(radial_geodesic_drift(special_point(label)) < 1e-8, "{label}");
        }
        // E3 sits on the chart boundary; relabel bodies 1 and 3 to move it inside.
        let (e3, _) = permute_bodies(&special_point(SpecialPoint::E3), [2, 1, 0], &MassConfig::default()).unwrap();
        assert!((2.0 * e3.eta).sin().abs() > 0.1);
        assert!(radial_geodesic_drift(e3) < 1e-8);
    }

    #[test]
    fn perturbed_radial_curve_is_not_geodesic() {
        let m = metric(ISQ, 0.0);
        let l4 = special_point(SpecialPoint::L4);
        assert!(radial_curve_residual(&m, &l4).unwrap() < 1e-12);
        let off = ChartPoint { eta: l4.eta + 0.05, ..l4 };
        assert!(radial_curve_residual(&m, &off).unwrap() > 1e-3);
    }

    /// Scales `dir` so that the trajectory energy is `e`.
    fn with_energy(m: &JmMetric, p: ChartPoint, dir: [f64; 4], e: f64) -> FlowState {
        let x = p.coords();
        let k = kinetic_metric(Space::C2, &x);
        let (v, _) = potential(m, &x).unwrap();
        let scale = (2.0 * (e - v) / inner(4, &k.g, &dir, &dir)).sqrt();
        FlowState::trajectory(p, dir.map(|c| c * scale))
    }

    #[test]
    fn trajectories_match_reparametrised_geodesics() {
        let (rot, omega, e) = lagrange_rotation(&MassConfig::default(), ISQ, 1.0).unwrap();
        let dev = compare_trajectory_geodesic(&metric(ISQ, e), &rot, 2.0 * PI / omega, 20, &tol()).unwrap();
        assert!(dev < 1e-6, "rotation {dev}");

        let (hom, e) = lagrange_homothety(&MassConfig::default(), ISQ, 1.0, 6f64.sqrt()).unwrap();
        assert!(e.abs() < 1e-12);
        let dev = compare_trajectory_geodesic(&metric(ISQ, 0.0), &hom, 1.0, 20, &tol()).unwrap();
        assert!(dev < 1e-6, "homothety {dev}");

        let m = metric(ISQ, 1.0);
        let start = with_energy(&m, ChartPoint::c2(1.5, 0.6, 0.3, 0.9), [0.8, 0.1, 0.2, -0.1], 1.0);
        let dev = compare_trajectory_geodesic(&m, &start, 2.0, 20, &tol()).unwrap();
        assert!(dev < 1e-6, "scattering {dev}");
    }

    #[test]
    fn lagrange_jacobi_identity() {
        let (hom, _) = lagrange_homothety(&MassConfig::default(), ISQ, 1.0, 6f64.sqrt()).unwrap();
        let path = flow(&metric(ISQ, 0.0), &hom, &uniform_clocks(1.0, 50), &tol()).unwrap();
        assert!(lagrange_jacobi_residual(&path, 0.0).unwrap() < 1e-6);

        for e in [1.0, -0.5] {
            let m = metric(ISQ, e);
            let start = with_energy(&m, ChartPoint::c2(1.5, 0.6, 0.3, 0.9), [0.8, 0.1, 0.2, -0.1], e);
            let path = flow(&m, &start, &uniform_clocks(0.5, 50), &tol()).unwrap();
            assert_eq!(path.status, StopStatus::Completed);
            assert!(lagrange_jacobi_residual(&path, e).unwrap() < 1e-6, "E = {e}");
        }

        let (rot, _, e) = lagrange_rotation(&MassConfig::default(), ISQ, 1.0).unwrap();
        let path = flow(&metric(ISQ, e), &rot, &uniform_clocks(1.0, 50), &tol()).unwrap();
        assert!(lagrange_jacobi_residual(&path, e).unwrap() < 1e-6);
    }

    #[test]
    fn collision_time_formulas() {
        let t = homothety_collision_time(1.0, 0.0, 1.0).unwrap();
        assert!((t - 1.0 / (2.0 * 6f64.sqrt())).abs() < 1e-15);
        for k in [1e-4, 1e-6, -1e-6] {
            let exact = 6f64.sqrt() * (-1.0 + (1.0 + k / 6.0f64).sqrt()) / k;
            let t = homothety_collision_time(1.0, k, 1.0).unwrap();
            assert!((t - exact).abs() < 1e-9);
            assert!((t - homothety_collision_time_zero_energy(1.0, 1.0)).abs() < k.abs());
        }
    }

    #[test]
    fn infall_reaches_collision_on_time() {
        for kappa in [0.0, 0.8, -2.0] {
            let tc = homothety_collision_time(1.0, kappa, 1.0).unwrap();
            let run = radial_infall(1.0, kappa, 1.0, 1e-6, &[], &tol()).unwrap();
            assert!((run.t_stop - tc).abs() < 1e-6, "kappa {kappa}: {} vs {tc}", run.t_stop);
        }
    }

    #[test]
    fn arc_length_diverges_logarithmically() {
        let tc = homothety_collision_time(1.0, 0.0, 1.0).unwrap();
        let times: Vec<f64> = (3..=9).map(|k| tc * (1.0 - 10f64.powi(-k))).collect();
        let run = radial_infall(1.0, 0.0, 1.0, 1e-7, &times, &tol()).unwrap();
        assert_eq!(run.arc.len(), times.len());
        let slope = log_slope(&run.arc, tc);
        let want = 0.5 * 3f64.sqrt();
        assert!((slope - want).abs() < 0.02 * want, "{slope}");
    }

    #[test]
    fn triple_collision_is_infinitely_far() {
        let m = metric(ISQ, 0.0);
        let cut = [1e-2, 1e-4, 1e-6, 1e-8];
        let prof =
            collision_distance_probe(&m, &special_point(SpecialPoint::L4).coords(), ProbeTarget::Triple, &cut).unwrap();
        for s in &prof {
            assert!((s.length - 3f64.sqrt() * (1.0 / s.cutoff).ln()).abs() < 1e-9);
        }
    }

    #[test]
    fn binary_collision_lengths() {
        let s2 = NearCollisionMetric::new(NearCollisionKind::PairS2);
        let prof = collision_distance_probe(&s2, &[0.1, 0.3, 0.0, 0.0], ProbeTarget::Binary { axis: 0 }, &[1e-3, 1e-6])
            .unwrap();
        for s in &prof {
            assert!((s.length - 0.5f64.sqrt() * (0.1 / s.cutoff).ln()).abs() < 1e-10);
        }

        let newt = NearCollisionMetric::new(NearCollisionKind::NewtonianC2);
        let start = [1.0, 0.1, 0.0, 0.3];
        let prof = collision_distance_probe(&newt, &start, ProbeTarget::Binary { axis: 1 }, &[1e-12, 1e-16]).unwrap();
        let want = 2.0 * (1.0 / 2f64.sqrt()).sqrt() * 0.1f64.sqrt();
        for s in &prof {
            let tail = 2.0 * (1.0 / 2f64.sqrt()).sqrt() * s.cutoff.sqrt();
            assert!((s.length + tail - want).abs() < 1e-8, "{} vs {want}", s.length);
        }
    }

    #[test]
    fn power_law_probe_is_finite_only_below_two() {
        let cuts = [1e-4, 1e-8, 1e-12];
        let len = |n: f64| {
            let mf = PowerLawProbe { n, unit: 1.0 };
            collision_distance_probe(&mf, &[1.0, 0.0, 0.0, 0.0], ProbeTarget::Binary { axis: 0 }, &cuts)
                .unwrap()
                .iter()
                .map(|s| s.length)
                .collect::<Vec<_>>()
        };
        let l1 = len(1.0);
        assert!((l1[2] - 2.0).abs() < 1e-5);
        let l2 = len(2.0);
        assert!((l2[2] - l2[1] - 4.0 * 10f64.ln()).abs() < 1e-8);
        let l3 = len(3.0);
        assert!(l3[2] > 1e5);
    }
}
