//! Runs every invariant suite and collects a machine-readable report.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use crate::coords::{special_point, ChartPoint, MassConfig, Space, SpecialPoint};
use crate::curvature::{riemann, scalar, scalar_closed_form, special_limits};
use crate::dynamics::{
    collision_distance_probe, compare_trajectory_geodesic, flow, homothety_collision_time,
    homothety_collision_time_zero_energy, lagrange_homothety, lagrange_jacobi_residual, lagrange_rotation, potential,
    radial_infall, uniform_clocks, FlowState, ProbeTarget, Tolerances,
};
use crate::error::Result;
use crate::linalg::inner;
use crate::metrics::{kinetic_metric, JmMetric, NearCollisionKind, NearCollisionMetric, PotentialKind, PowerLawProbe};
use crate::stability::{
    homothety_tensor, homothety_window_verdicts, jacobi_field_evolve, rotation_tensor, stability_tensor,
    stability_verdicts, two_geodesic_separation, Verdict,
};

use super::grid::GridSpec;
use super::properties::run_property_suite;
use super::scan::{inequality_scan_with, InequalityGroup, ScanOptions, ScanReport};
use super::SCHEMA;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub skip_newtonian: bool,
    /// Offset added to `h` in the curvature chain (`0` for a normal run).
    pub fault: f64,
    pub scan_grid: GridSpec,
    /// Per-axis size of the closed-form/numeric comparison grid.
    pub compare_grid: usize,
    pub seed: u64,
    pub property_samples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            skip_newtonian: false,
            fault: 0.0,
            scan_grid: GridSpec::default(),
            compare_grid: 60,
            seed: 2024,
            property_samples: 1000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteStatus {
    Passed,
    Failed,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub expected: Option<f64>,
    /// Absolute tolerance on `|value - expected|`, or the bound `value` must stay under.
    pub tolerance: Option<f64>,
    pub passed: bool,
}

impl Check {
    fn close(name: impl Into<String>, value: f64, expected: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            value,
            expected: Some(expected),
            tolerance: Some(tol),
            passed: (value - expected).abs() < tol,
        }
    }

    fn below(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self { name: name.into(), value, expected: None, tolerance: Some(bound), passed: value < bound }
    }

    fn flag(name: impl Into<String>, ok: bool) -> Self {
        Self { name: name.into(), value: ok as u8 as f64, expected: Some(1.0), tolerance: None, passed: ok }
    }

    fn from_result(name: impl Into<String>, r: Result<Check>) -> Self {
        let name = name.into();
        r.unwrap_or_else(|e| Check {
            name: format!("{name}: {e}"),
            value: f64::NAN,
            expected: None,
            tolerance: None,
            passed: false,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub newtonian: bool,
    pub status: SuiteStatus,
    pub seconds: f64,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub config: VerifyConfig,
    pub suites: Vec<SuiteResult>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }

    /// One line per suite plus each failing check.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            let tag = match s.status {
                SuiteStatus::Passed => "PASS",
                SuiteStatus::Failed => "FAIL",
                SuiteStatus::Skipped => "SKIP",
            };
            let _ = writeln!(out, "{tag} {:<28} {:>3} checks {:>7.2}s", s.name, s.checks.len(), s.seconds);
            for c in s.checks.iter().filter(|c| !c.passed) {
                let _ = writeln!(
                    out,
                    "     failed: {} (value {:e}, expected {:?}, tol {:?})",
                    c.name, c.value, c.expected, c.tolerance
                );
            }
        }
        let _ = writeln!(out, "{}", if self.passed { "all suites passed" } else { "verification FAILED" });
        out
    }
}

type SuiteFn = fn(&VerifyConfig, &mut Shared) -> Vec<Check>;

/// Results computed once and used by more than one suite.
#[derive(Default)]
struct Shared {
    scan: Option<ScanReport>,
}

impl Shared {
    fn scan(&mut self, cfg: &VerifyConfig) -> &ScanReport {
        self.scan.get_or_insert_with(|| {
            inequality_scan_with(&ScanOptions { grid: cfg.scan_grid, fault: cfg.fault, refine: true })
        })
    }
}

const SUITES: [(&str, bool, SuiteFn); 12] = [
    ("closed-form-vs-numeric", false, closed_vs_numeric_isq),
    ("closed-form-vs-numeric-newton", true, closed_vs_numeric_newton),
    ("special-values", false, special_values),
    ("conformal-inequalities", false, conformal_inequalities),
    ("scalar-curvature-chain", false, chain),
    ("curvature-bounds", false, curvature_bounds),
    ("dynamics", false, dynamics),
    ("dynamics-newton", true, dynamics_newton),
    ("completeness", false, completeness),
    ("completeness-newton", true, completeness_newton),
    ("stability", false, stability),
    ("properties", false, properties),
];

pub fn run_verification_suite(cfg: &VerifyConfig) -> VerificationReport {
    let mut shared = Shared::default();
    let suites: Vec<SuiteResult> = SUITES
        .iter()
        .map(|&(name, newtonian, run)| {
            if newtonian && cfg.skip_newtonian {
                return SuiteResult { name, newtonian, status: SuiteStatus::Skipped, seconds: 0.0, checks: vec![] };
            }
            let t0 = Instant::now();
            let checks = run(cfg, &mut shared);
            let ok = !checks.is_empty() && checks.iter().all(|c| c.passed);
            SuiteResult {
                name,
                newtonian,
                status: if ok { SuiteStatus::Passed } else { SuiteStatus::Failed },
                seconds: t0.elapsed().as_secs_f64(),
                checks,
            }
        })
        .collect();
    let passed = suites.iter().all(|s| s.status != SuiteStatus::Failed);
    VerificationReport { schema: SCHEMA, config: cfg.clone(), suites, passed }
}

/// `max |R_closed - R_numeric|` over an `n x n` grid with exclusion `1e-2`.
pub fn closed_form_discrepancy(space: Space, potential: PotentialKind, n: usize) -> Result<f64> {
    let m = JmMetric::standard(space, potential)?;
    let pts = GridSpec::square(n).with_exclusion(1e-2).points();
    let errs = super::grid::par_map(&pts, |&(eta, xi2)| -> Result<f64> {
        let p = ChartPoint { space, r: 1.0, eta, xi1: 0.0, xi2 };
        Ok((scalar_closed_form(&m, &p)? - scalar(&m, &p.coords())?).abs())
    });
    errs.into_iter().try_fold(0.0f64, |acc, e| Ok(acc.max(e?)))
}

fn compare_checks(cfg: &VerifyConfig, combos: &[(Space, PotentialKind)]) -> Vec<Check> {
    combos
        .iter()
        .map(|&(space, pot)| {
            let name = format!("{space} {pot}");
            Check::from_result(
                &name,
                closed_form_discrepancy(space, pot, cfg.compare_grid).map(|d| Check::below(&name, d, 1e-5)),
            )
        })
        .collect()
}

fn closed_vs_numeric_isq(cfg: &VerifyConfig, _: &mut Shared) -> Vec<Check> {
    let isq = PotentialKind::InverseSquare;
    compare_checks(cfg, &[(Space::S2, isq), (Space::R3, isq), (Space::S3, isq), (Space::C2, isq)])
}

fn closed_vs_numeric_newton(cfg: &VerifyConfig, _: &mut Shared) -> Vec<Check> {
    let n = PotentialKind::Newtonian;
    compare_checks(cfg, &[(Space::R3, n), (Space::C2, n)])
}

fn special_values(_: &VerifyConfig, _: &mut Shared) -> Vec<Check> {
    let mut out = Vec::new();
    match special_limits() {
        Ok(table) => {
            for e in table.iter().filter(|e| e.expected.is_some()) {
                out.push(Check::close(format!("{} at {}", e.label, e.point), e.value, e.expected.unwrap_or(0.0), 1e-4));
            }
        }
        Err(e) => out.push(Check::from_result("special limits", Err(e))),
    }
    // Leading-order near-collision metrics.
    let at = [0.3, 0.2, 0.4, 0.1];
    for (kind, planes) in [
        (NearCollisionKind::PairR3, &[(0usize, 1usize)][..]),
        (NearCollisionKind::PairS3, &[(0, 1)][..]),
        (NearCollisionKind::PairC2, &[(0, 1), (1, 2), (0, 2)][..]),
    ] {
        let m = NearCollisionMetric::new(kind);
        let name = format!("{kind:?}");
        match riemann(&m, &at) {
            Ok(c) => {
                let want = if kind == NearCollisionKind::PairC2 { -12.0 } else { -4.0 };
                out.push(Check::close(format!("{name} scalar"), c.scalar, want, 1e-4));
                for &(a, b) in planes {
                    let label = format!("{name} K({a},{b})");
                    out.push(Check::from_result(
                        &label,
                        c.coordinate_sectional(a, b).map(|k| Check::close(&label, k, -2.0, 1e-4)),
                    ));
                }
            }
            Err(e) => out.push(Check::from_result(&name, Err(e))),
        }
    }
    out
}

fn conformal_inequalities(cfg: &VerifyConfig, shared: &mut Shared) -> Vec<Check> {
    let scan = shared.scan(cfg);
    let mut out: Vec<Check> = scan
        .inequalities
        .iter()
        .filter(|r| r.group == InequalityGroup::Conformal)
        .map(|r| Check { name: r.name.into(), value: r.min_slack, expected: None, tolerance: None, passed: r.passed })
        .collect();
    let refined = |name: &str| scan.get(name).and_then(|r| r.refined);
    if let Some(h) = refined("h >= 3") {
        out.push(Check::close("min h", h.value, 3.0, 1e-8));
        out.push(Check::flag(
            "min h at L4/L5",
            matches!(h.nearest, SpecialPoint::L4 | SpecialPoint::L5) && h.distance < 1e-3,
        ));
    }
    if let Some(a) = refined("A >= 17/27") {
        out.push(Check::close("min A", a.value, 17.0 / 27.0, 1e-8));
        out.push(Check::flag("min A at an Euler point", is_euler(a.nearest) && a.distance < 1e-3));
    }
    if let Some(b) = refined("B > -1/2") {
        out.push(Check::close("min B", b.value, -32.0 / 81.0, 1e-3));
    }
    if let Some(z) = refined("zeta_ratio > 55/27") {
        out.push(Check::close("min zeta ratio", z.value, 8.0 / 3.0, 1e-3));
        out.push(Check::flag("min zeta ratio at an Euler point", is_euler(z.nearest) && z.distance < 1e-3));
    }
    out
}

fn is_euler(p: SpecialPoint) -> bool {
    matches!(p, SpecialPoint::E1 | SpecialPoint::E2 | SpecialPoint::E3)
}

fn group_checks(cfg: &VerifyConfig, shared: &mut Shared, group: InequalityGroup) -> Vec<Check> {
    shared
        .scan(cfg)
        .inequalities
        .iter()
        .filter(|r| r.group == group)
        .map(|r| Check { name: r.name.into(), value: r.min_slack, expected: None, tolerance: None, passed: r.passed })
        .collect()
}

fn chain(cfg: &VerifyConfig, shared: &mut Shared) -> Vec<Check> {
    group_checks(cfg, shared, InequalityGroup::Chain)
}

fn curvature_bounds(cfg: &VerifyConfig, shared: &mut Shared) -> Vec<Check> {
    group_checks(cfg, shared, InequalityGroup::CurvatureBound)
}

fn c2(potential: PotentialKind, energy: f64) -> Result<JmMetric> {
    JmMetric::new(Space::C2, potential, energy, MassConfig::default())
}

/// Trajectory start with direction `dir` scaled to energy `e`.
fn with_energy(m: &JmMetric, p: ChartPoint, dir: [f64; 4], e: f64) -> Result<FlowState> {
    let x = p.coords();
    let k = kinetic_metric(Space::C2, &x);
    let (v, _) = potential(m, &x)?;
    let scale = (2.0 * (e - v) / inner(4, &k.g, &dir, &dir)).sqrt();
    Ok(FlowState::trajectory(p, dir.map(|c| c * scale)))
}

fn dynamics(_: &VerifyConfig, _: &mut Shared) -> Vec<Check> {
    let isq = PotentialKind::InverseSquare;
    let tol = Tolerances::default();
    let mc = MassConfig::default();
    let mut out = Vec::new();
    out.push(Check::from_result(
        "rotation one period",
        (|| {
            let (rot, omega, e) = lagrange_rotation(&mc, isq, 1.0)?;
            let d = compare_trajectory_geodesic(&c2(isq, e)?, &rot, 2.0 * PI / omega, 20, &tol)?;
            Ok(Check::below("rotation one period", d, 1e-6))
        })(),
    ));
    out.push(Check::from_result(
        "zero-energy homothety",
        (|| {
            let (hom, _) = lagrange_homothety(&mc, isq, 1.0, 6f64.sqrt())?;
            let d = compare_trajectory_geodesic(&c2(isq, 0.0)?, &hom, 1.0, 20, &tol)?;
            Ok(Check::below("zero-energy homothety", d, 1e-6))
        })(),
    ));
    out.push(Check::from_result(
        "scattering E = 1",
        (|| {
            let m = c2(isq, 1.0)?;
            let start = with_energy(&m, ChartPoint::c2(1.5, 0.6, 0.3, 0.9), [0.8, 0.1, 0.2, -0.1], 1.0)?;
            let d = compare_trajectory_geodesic(&m, &start, 2.0, 20, &tol)?;
            Ok(Check::below("scattering E = 1", d, 1e-6))
        })(),
    ));
    for e in [1.0, 0.0, -0.5] {
        let name = format!("Lagrange-Jacobi E = {e}");
        out.push(Check::from_result(
            &name,
            (|| {
                let m = c2(isq, e)?;
                let start = with_energy(&m, ChartPoint::c2(1.5, 0.6, 0.3, 0.9), [0.8, 0.1, 0.2, -0.1], e)?;
                let path = flow(&m, &start, &uniform_clocks(0.5, 50), &tol)?;
                Ok(Check::below(&name, lagrange_jacobi_residual(&path, e)?, 1e-6))
            })(),
        ));
    }
    out.push(Check::from_result(
        "collision time kappa = 0",
        (|| {
            let t = homothety_collision_time(1.0, 0.0, 1.0)?;
            Ok(Check::close("collision time kappa = 0", t, 1.0 / (2.0 * 6f64.sqrt()), 1e-6))
        })(),
    ));
    out.push(Check::close(
        "zero-energy approximation",
        homothety_collision_time_zero_energy(1.0, 1.0),
        1.0 / (2.0 * 6f64.sqrt()),
        1e-12,
    ));
    for kappa in [0.0, 0.8, -2.0] {
        let name = format!("infall time kappa = {kappa}");
        out.push(Check::from_result(
            &name,
            (|| {
                let tc = homothety_collision_time(1.0, kappa, 1.0)?;
                let run = radial_infall(1.0, kappa, 1.0, 1e-6, &[], &tol)?;
                Ok(Check::close(&name, run.t_stop, tc, 1e-6))
            })(),
        ));
    }
    out
}

fn dynamics_newton(_: &VerifyConfig, _: &mut Shared) -> Vec<Check> {
    let n = PotentialKind::Newtonian;
    let tol = Tolerances::default();
    let name = "Newtonian rotation one period";
    vec![Check::from_result(
        name,
        (|| {
            let (rot, omega, e) = lagrange_rotation(&MassConfig::default(), n, 1.0)?;
            let d = compare_trajectory_geodesic(&c2(n, e)?, &rot, 2.0 * PI / omega, 20, &tol)?;
            Ok(Check::below(name, d, 1e-6))
        })(),
    )]
}

/// Least-squares slope of `length` against `ln(1/eps)`.
fn log_fit(samples: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(c, l)| (-c.ln(), l)).collect();
    let n = pts.len() as f64;
    let (mx, my) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0 / n, a.1 + p.1 / n));
    let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + (p.0 - mx) * (p.1 - my), a.1 + (p.0 - mx).powi(2)));
    sxy / sxx
}

fn probe_slope(mf: &dyn crate::metrics::MetricField, start: &[f64; 4], target: ProbeTarget) -> Result<f64> {
    let cuts: Vec<f64> = (2..=8).map(|k| 10f64.powi(-k)).collect();
    let prof = collision_distance_probe(mf, start, target, &cuts)?;
    Ok(log_fit(&prof.iter().map(|s| (s.cutoff, s.length)).collect::<Vec<_>>()))
}

fn completeness(_: &VerifyConfig, _: &mut Shared) -> Vec<Check> {
    let mut out = Vec::new();
    let want = 3f64.sqrt();
    out.push(Check::from_result(
        "triple slope",
        (|| {
            let m = c2(PotentialKind::InverseSquare, 0.0)?;
            let s = probe_slope(&m, &special_point(SpecialPoint::L4).coords(), ProbeTarget::Triple)?;
            Ok(Check::close("triple slope", s, want, 0.02 * want))
        })(),
    ));
    let want = 0.5f64.sqrt();
    out.push(Check::from_result(
        "binary slope on S2",
        (|| {
            let m = NearCollisionMetric::new(NearCollisionKind::PairS2);
            let s = probe_slope(&m, &[0.1, 0.3, 0.0, 0.0], ProbeTarget::Binary { axis: 0 })?;
            Ok(Check::close("binary slope on S2", s, want, 0.02 * want))
        })(),
    ));
    let cuts = [1e-4, 1e-8, 1e-12];
    let lengths = |n: f64| -> Result<Vec<f64>> {
        let mf = PowerLawProbe { n, unit: 1.0 };
        Ok(collision_distance_probe(&mf, &[1.0, 0.0, 0.0, 0.0], ProbeTarget::Binary { axis: 0 }, &cuts)?
            .iter()
            .map(|s| s.length)
            .collect())
    };
    out.push(Check::from_result(
        "power law n = 1 finite",
        lengths(1.0).map(|l| Check::close("power law n = 1 finite", l[2], 2.0, 1e-4)),
    ));
    for n in [2.0, 3.0] {
        let name = format!("power law n = {n} diverges");
        out.push(Check::from_result(
            &name,
            lengths(n).map(|l| Check::flag(&name, l[2] > l[1] && l[1] > l[0] && l[2] - l[1] > 1.0)),
        ));
    }
    out
}

fn completeness_newton(_: &VerifyConfig, _: &mut Shared) -> Vec<Check> {
    let name = "Newtonian binary length";
    vec![Check::from_result(
        name,
        (|| {
            let m = NearCollisionMetric::new(NearCollisionKind::NewtonianC2);
            let (r, eta0, eps) = (1.0, 0.1, 1e-20);
            let prof = collision_distance_probe(&m, &[r, eta0, 0.0, 0.3], ProbeTarget::Binary { axis: 1 }, &[eps])?;
            let want = 2.0 * (r / 2f64.sqrt()).sqrt() * eta0.sqrt();
            Ok(Check::close(name, prof[0].length, want, 1e-8))
        })(),
    )]
}

fn stability(_: &VerifyConfig, _: &mut Shared) -> Vec<Check> {
    let mut out = Vec::new();
    let mc = MassConfig::default();
    let newton = PotentialKind::Newtonian;
    out.push(Check::from_result(
        "rotation eigenvalue ratios",
        (|| {
            let (rot, omega, e) = lagrange_rotation(&mc, newton, 1.0)?;
            let rep = stability_tensor(&c2(newton, e)?, &rot.point.coords(), &rot.velocity)?;
            let want = rotation_tensor(omega);
            let s = rep.matrix();
            let err = (0..4).map(|i| ((s[i][i] - want[i]) / (omega * omega)).abs()).fold(0.0, f64::max);
            Ok(Check::below("rotation eigenvalue ratios", err, 1e-5))
        })(),
    ));
    let l4 = |r: f64| ChartPoint::c2(r, FRAC_PI_4, 0.0, FRAC_PI_4);
    for pot in [PotentialKind::InverseSquare, newton] {
        for e in [-2.0, -1.0, 0.0, 1.0] {
            let name = format!("homothety {pot} E = {e}");
            out.push(Check::from_result(
                &name,
                (|| {
                    // r = 0.5 keeps E = -2 inside the Hill region for both potentials.
                    let (r, rdot) = (0.5, 0.3);
                    let rep = stability_tensor(&c2(pot, e)?, &l4(r).coords(), &[rdot, 0.0, 0.0, 0.0])?;
                    let want = homothety_tensor(pot, 1.0, e, r, rdot);
                    let s = rep.matrix();
                    let err = (0..4).map(|i| (s[i][i] - want[i]).abs()).fold(0.0, f64::max);
                    Ok(Check::below(&name, err, 1e-5))
                })(),
            ));
        }
    }
    use Verdict::*;
    for (e, want) in [(0.5, [Unstable; 3]), (-2.0, [Stable; 3]), (-1.0, [Unstable, Stable, Unstable])] {
        let name = format!("energy window E = {e}");
        out.push(Check::from_result(
            &name,
            (|| {
                let closed = homothety_window_verdicts(1.0, e, 1.0);
                let rep =
                    stability_tensor(&c2(PotentialKind::InverseSquare, e)?, &l4(1.0).coords(), &[0.3, 0.0, 0.0, 0.0])?;
                let engine: Vec<Verdict> = stability_verdicts(&rep, &[1, 2, 3]).iter().map(|d| d.verdict).collect();
                Ok(Check::flag(&name, closed == want && engine == want.to_vec()))
            })(),
        ));
    }
    let name = "Jacobi field vs two geodesics";
    out.push(Check::from_result(
        name,
        (|| {
            let m = c2(PotentialKind::InverseSquare, 0.5)?;
            let start = FlowState::geodesic(ChartPoint::c2(1.2, 0.7, 0.3, 0.9), [0.2, 0.1, -0.15, 0.05]);
            let (y0, w0) = ([0.3, 0.2, -0.1, 0.4], [0.1, 0.0, 0.2, -0.1]);
            let tol = Tolerances { rtol: 1e-11, atol: 1e-13, ..Default::default() };
            let ls = uniform_clocks(0.9, 3);
            let (sep, cov) = two_geodesic_separation(&m, &start, &y0, &w0, 1e-6, &ls, &tol)?;
            let jf = jacobi_field_evolve(&m, &start, &y0, &cov, &ls, &tol)?;
            let mut worst: f64 = 0.0;
            for (s, j) in sep.iter().zip(&jf) {
                let d: f64 = s.iter().zip(&j.y).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
                worst = worst.max(d / s.iter().map(|a| a * a).sum::<f64>().sqrt());
            }
            Ok(Check::below(name, worst, 1e-3))
        })(),
    ));
    out
}

fn properties(cfg: &VerifyConfig, _: &mut Shared) -> Vec<Check> {
    run_property_suite(cfg.seed, cfg.property_samples)
        .into_iter()
        .map(|p| Check {
            name: format!("{} ({} samples)", p.name, p.samples),
            value: p.max_residual,
            expected: None,
            tolerance: Some(p.tolerance),
            passed: p.passed,
        })
        .collect()
}
