//! Newtonian trajectories and JM geodesics in chart coordinates.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::coords::{ChartPoint, Space};
use crate::curvature::{christoffel, connection_from};
use crate::error::{Error, Result};
use crate::linalg::{inner, mat_vec, Vec4, ZERO_VEC};
use crate::metrics::{angular_potential, kinetic_metric, pair_terms, JmMetric, MetricField};

use super::integrator::{integrate, Event, Solution, StepStats, StopStatus, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlowKind {
    /// Clock is Newtonian time `t`.
    Trajectory,
    /// Clock is the affine parameter `lambda`.
    Geodesic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowState {
    pub point: ChartPoint,
    pub velocity: Vec4,
    pub clock: f64,
    pub kind: FlowKind,
}

impl FlowState {
    pub fn trajectory(point: ChartPoint, velocity: Vec4) -> Self {
        Self { point, velocity, clock: 0.0, kind: FlowKind::Trajectory }
    }

    pub fn geodesic(point: ChartPoint, velocity: Vec4) -> Self {
        Self { point, velocity, clock: 0.0, kind: FlowKind::Geodesic }
    }

    fn pack(&self) -> Vec<f64> {
        let n = self.point.space.dim();
        let x = self.point.coords();
        x[..n].iter().chain(&self.velocity[..n]).copied().collect()
    }

    fn unpack(space: Space, kind: FlowKind, clock: f64, y: &[f64]) -> Self {
        let n = space.dim();
        let mut x = ZERO_VEC;
        let mut v = ZERO_VEC;
        x[..n].copy_from_slice(&y[..n]);
        v[..n].copy_from_slice(&y[n..2 * n]);
        Self { point: ChartPoint::from_coords(space, &x), velocity: v, clock, kind }
    }

    /// `1/2 k(v, v) + V` with `k` the kinetic metric.
    pub fn energy(&self, metric: &JmMetric) -> Result<f64> {
        let x = self.point.coords();
        let k = kinetic_metric(self.point.space, &x);
        let (v, _) = potential(metric, &x)?;
        Ok(0.5 * inner(k.dim, &k.g, &self.velocity, &self.velocity) + v)
    }

    /// `1/2 g(v, v)` in `mf`.
    pub fn kinetic_t(&self, mf: &dyn MetricField) -> Result<f64> {
        let g = mf.components(&self.point.coords())?;
        Ok(0.5 * inner(g.dim, &g.g, &self.velocity, &self.velocity))
    }

    /// Energy for trajectories, `T` for geodesics.
    pub fn conserved(&self, metric: &JmMetric) -> Result<f64> {
        match self.kind {
            FlowKind::Trajectory => self.energy(metric),
            FlowKind::Geodesic => self.kinetic_t(metric),
        }
    }
}

/// `V = -W / r^n` and its chart gradient, with no Hill-region check.
pub fn potential(metric: &JmMetric, x: &Vec4) -> Result<(f64, Vec4)> {
    if !metric.space.has_radius() {
        return Err(Error::InvalidQuotient("potential energy needs a radial coordinate"));
    }
    let (ie, ix) = (metric.space.eta_index(), metric.space.xi2_index());
    let w = angular_potential(&metric.masses, metric.potential, x[ie], x[ix])?;
    let r = x[0];
    if !(r > 0.0) {
        return Err(Error::ZeroSize);
    }
    let n = metric.potential.exponent();
    let rn = r.powf(-n);
    let mut dv = ZERO_VEC;
    dv[0] = n * w.value * rn / r;
    dv[ie] = -w.d_eta * rn;
    dv[ix] = -w.d_xi2 * rn;
    Ok((-w.value * rn, dv))
}

/// Acceleration of a Newtonian trajectory:
/// `a = -k^{-1} dV - Gamma_k(v, v)` with `Gamma_k` the kinetic connection.
pub fn trajectory_rhs(metric: &JmMetric, x: &Vec4, v: &Vec4) -> Result<Vec4> {
    let space = metric.space;
    let (pot, dv) = potential(metric, x)?;
    // E - V is the kinetic energy; allow integrator-level drift below zero.
    if metric.energy - pot < -1e-8 * (1.0 + pot.abs()) {
        return Err(Error::OutsideHill { conformal: metric.energy - pot });
    }
    let conn = connection_from(kinetic_metric(space, x))?;
    let force = mat_vec(conn.dim, &conn.inverse, &dv);
    Ok(accel(&conn.gamma, conn.dim, v, Some(&force)))
}

/// Geodesic acceleration `-Gamma(v, v)`.
pub fn geodesic_rhs(mf: &dyn MetricField, x: &Vec4, v: &Vec4) -> Result<Vec4> {
    let conn = christoffel(mf, x)?;
    Ok(accel(&conn.gamma, conn.dim, v, None))
}

fn accel(gamma: &[crate::linalg::Mat4; 4], dim: usize, v: &Vec4, force: Option<&Vec4>) -> Vec4 {
    let mut a = ZERO_VEC;
    for l in 0..dim {
        let mut s = force.map_or(0.0, |f| f[l]);
        for i in 0..dim {
            for j in 0..dim {
                s += gamma[l][i][j] * v[i] * v[j];
            }
        }
        a[l] = -s;
    }
    a
}

/// `sigma = (E - V) / sqrt(T)` with `T = 1/2 g(v, v)` in the JM metric.
pub fn reparam_sigma(metric: &JmMetric, state: &FlowState) -> Result<f64> {
    let x = state.point.coords();
    let (pot, _) = potential(metric, &x)?;
    let phi = metric.energy - pot;
    if !(phi > 0.0) {
        return Err(Error::OutsideHill { conformal: phi });
    }
    let t = state.kinetic_t(metric)?;
    if !(t > 0.0) {
        return Err(Error::InvalidArgument("sigma needs a nonzero velocity".into()));
    }
    Ok(phi / t.sqrt())
}

/// Collision and Hill-region stop rules for runs in `metric`'s chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StopRules {
    /// Stop when a pair separation falls below this fraction of `r`.
    pub pair_fraction: f64,
    /// Stop when `r` falls below this fraction of its initial value.
    pub radius_fraction: f64,
    /// Geodesics stop when `Phi` falls below this.
    pub hill_margin: f64,
}

impl Default for StopRules {
    fn default() -> Self {
        Self { pair_fraction: 1e-8, radius_fraction: 1e-8, hill_margin: 1e-10 }
    }
}

fn collision_events<'a>(metric: &'a JmMetric, rules: &StopRules, r0: f64) -> Vec<Event<'a>> {
    let space = metric.space;
    let terms = pair_terms(&metric.masses);
    let (ie, ix) = (space.eta_index(), space.xi2_index());
    let frac = rules.pair_fraction;
    let mut events = vec![Event::new(StopStatus::CollisionThreshold, move |_, y: &[f64]| {
        terms.iter().map(|p| p.d_value(y[ie], y[ix]).max(0.0).sqrt()).fold(f64::INFINITY, f64::min) - frac
    })];
    if space.has_radius() {
        let rmin = rules.radius_fraction * r0;
        events.push(Event::new(StopStatus::CollisionThreshold, move |_, y: &[f64]| y[0] - rmin));
    }
    events
}

/// Sampled run with its stop cause.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathRecord {
    pub kind: FlowKind,
    pub space: Space,
    pub samples: Vec<FlowState>,
    /// Conserved quantity minus its initial value, per sample.
    pub drift: Vec<f64>,
    pub stats: StepStats,
    pub status: StopStatus,
}

impl PathRecord {
    fn from_solution(metric: &JmMetric, start: &FlowState, sol: &Solution) -> Result<Self> {
        let space = start.point.space;
        let c0 = start.conserved(metric)?;
        let mut samples = vec![*start];
        let mut drift = vec![0.0];
        for (t, y) in sol.t.iter().zip(&sol.y) {
            let s = FlowState::unpack(space, start.kind, *t, y);
            drift.push(s.conserved(metric).map_or(f64::NAN, |c| c - c0));
            samples.push(s);
        }
        Ok(Self { kind: start.kind, space, samples, drift, stats: sol.stats, status: sol.status })
    }

    pub fn max_drift(&self) -> f64 {
        self.drift.iter().fold(0.0, |m, d| m.max(d.abs()))
    }

    pub fn last(&self) -> &FlowState {
        self.samples.last().unwrap()
    }

    /// CSV with a `#` header line carrying the stop status.
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        let names = self.space.coordinate_names();
        writeln!(
            w,
            "# kind={:?} status={} accepted={} rejected={}",
            self.kind, self.status, self.stats.accepted, self.stats.rejected
        )?;
        let clock = match self.kind {
            FlowKind::Trajectory => "t",
            FlowKind::Geodesic => "lambda",
        };
        let mut header = vec![clock.to_string()];
        header.extend(names.iter().map(|n| n.to_string()));
        header.extend(names.iter().map(|n| format!("d{n}")));
        header.push("drift".into());
        writeln!(w, "{}", header.join(","))?;
        let n = self.space.dim();
        for (s, d) in self.samples.iter().zip(&self.drift) {
            let x = s.point.coords();
            let mut row = vec![format!("{:.16e}", s.clock)];
            row.extend(x[..n].iter().map(|v| format!("{v:.16e}")));
            row.extend(s.velocity[..n].iter().map(|v| format!("{v:.16e}")));
            row.push(format!("{d:.16e}"));
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Integrates a trajectory (`Trajectory` start) or geodesic (`Geodesic`
/// start) of `metric`, sampling at `clocks`.
pub fn flow(metric: &JmMetric, start: &FlowState, clocks: &[f64], tol: &Tolerances) -> Result<PathRecord> {
    flow_with_rules(metric, start, clocks, tol, &StopRules::default())
}

pub fn flow_with_rules(
    metric: &JmMetric,
    start: &FlowState,
    clocks: &[f64],
    tol: &Tolerances,
    rules: &StopRules,
) -> Result<PathRecord> {
    if start.point.space != metric.space {
        return Err(Error::Dimension { expected: metric.space.dim(), got: start.point.space.dim() });
    }
    let n = metric.space.dim();
    let kind = start.kind;
    let rhs = |_: f64, y: &[f64], d: &mut [f64]| -> Result<()> {
        let mut x = ZERO_VEC;
        let mut v = ZERO_VEC;
        x[..n].copy_from_slice(&y[..n]);
        v[..n].copy_from_slice(&y[n..]);
        let a = match kind {
            FlowKind::Trajectory => trajectory_rhs(metric, &x, &v)?,
            FlowKind::Geodesic => geodesic_rhs(metric, &x, &v)?,
        };
        d[..n].copy_from_slice(&v[..n]);
        d[n..].copy_from_slice(&a[..n]);
        Ok(())
    };
    let mut events = collision_events(metric, rules, start.point.radius());
    if kind == FlowKind::Geodesic {
        let margin = rules.hill_margin;
        events.push(Event::new(StopStatus::HillBoundary, move |_, y: &[f64]| {
            let mut x = ZERO_VEC;
            x[..n].copy_from_slice(&y[..n]);
            metric.conformal_factor(&x).map_or(-1.0, |(phi, _)| phi - margin)
        }));
    }
    let clocks: Vec<f64> = clocks.iter().map(|c| c - start.clock).collect();
    let mut sol = integrate(rhs, 0.0, &start.pack(), &clocks, &events, tol)?;
    for t in &mut sol.t {
        *t += start.clock;
    }
    PathRecord::from_solution(metric, start, &sol)
}

/// `n` evenly spaced clocks in `(0, horizon]`.
pub fn uniform_clocks(horizon: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|k| horizon * k as f64 / n as f64).collect()
}

/// Integrates the trajectory over `[0, horizon]` and the geodesic with
/// initial velocity `v / sigma`, mapping `lambda -> t` through
/// `dt/dlambda = 1/sigma`. Returns the largest coordinate difference over
/// `samples` common times.
pub fn compare_trajectory_geodesic(
    metric: &JmMetric,
    initial: &FlowState,
    horizon: f64,
    samples: usize,
    tol: &Tolerances,
) -> Result<f64> {
    let space = metric.space;
    let n = space.dim();
    let times = uniform_clocks(horizon, samples);
    let traj = flow(metric, &FlowState { kind: FlowKind::Trajectory, clock: 0.0, ..*initial }, &times, tol)?;
    if traj.status != StopStatus::Completed {
        return Err(Error::Integration(format!("trajectory stopped early: {}", traj.status)));
    }
    let sigma0 = reparam_sigma(metric, &FlowState { kind: FlowKind::Geodesic, ..*initial })?;
    let mut y: Vec<f64> = FlowState::geodesic(initial.point, initial.velocity.map(|c| c / sigma0)).pack();
    y.push(0.0);

    let rhs = |_: f64, y: &[f64], d: &mut [f64]| -> Result<()> {
        let mut x = ZERO_VEC;
        let mut v = ZERO_VEC;
        x[..n].copy_from_slice(&y[..n]);
        v[..n].copy_from_slice(&y[n..2 * n]);
        let a = geodesic_rhs(metric, &x, &v)?;
        d[..n].copy_from_slice(&v[..n]);
        d[n..2 * n].copy_from_slice(&a[..n]);
        let s = reparam_sigma(metric, &FlowState::geodesic(ChartPoint::from_coords(space, &x), v))?;
        d[2 * n] = 1.0 / s;
        Ok(())
    };
    let mut rhs = rhs;
    let mut lambda = 0.0;
    let mut worst = 0.0f64;
    for (k, &t_target) in times.iter().enumerate() {
        let ev = Event::new(StopStatus::Completed, move |_, y: &[f64]| t_target - y[2 * n]);
        let sol = integrate(&mut rhs, lambda, &y, &[lambda + 1e6], &[ev], tol)?;
        let (l, yl) = sol.last();
        if sol.status != StopStatus::Completed || (yl[2 * n] - t_target).abs() > 1e-9 * (1.0 + t_target) {
            return Err(Error::Integration(format!("geodesic did not reach t = {t_target}: {}", sol.status)));
        }
        lambda = l;
        y = yl.to_vec();
        let xt = traj.samples[k + 1].point.coords();
        for i in 0..n {
            worst = worst.max((xt[i] - y[i]).abs());
        }
    }
    Ok(worst)
}
