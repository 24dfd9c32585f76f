//! Lagrange rotation and homothety initial data, the homothety collision
//! time, and the Lagrange-Jacobi identity.

use crate::coords::{equilateral_point, ChartPoint, MassConfig};
use crate::error::{Error, Result};
use crate::linalg::{Vec4, ZERO_VEC};
use crate::metrics::{angular_potential, JmMetric, PotentialKind};

use super::flow::{FlowState, PathRecord};
use super::integrator::{integrate, Event, StopStatus, Tolerances};

fn equilateral_w(mc: &MassConfig, potential: PotentialKind) -> Result<(ChartPoint, f64)> {
    let p = equilateral_point(mc, 1.0)?;
    let w = angular_potential(mc, potential, p.eta, p.xi2)?.value;
    Ok((p, w))
}

/// Rigid rotation of the equilateral triangle of size `r` about its centre
/// of mass: velocity `omega d_xi1` with `omega^2 = n W / r^{n+2}`.
///
/// For the inverse-square potential this forces `E = 0`; for the Newtonian
/// one `E = -W / (2 r)`. Returns the start state, `omega`, and `E`.
pub fn lagrange_rotation(mc: &MassConfig, potential: PotentialKind, r: f64) -> Result<(FlowState, f64, f64)> {
    let (p, w) = equilateral_w(mc, potential)?;
    let n = potential.exponent();
    let omega = (n * w / r.powf(n + 2.0)).sqrt();
    let mut v = ZERO_VEC;
    v[2] = omega;
    let energy = 0.5 * r * r * omega * omega - w / r.powf(n);
    Ok((FlowState::trajectory(ChartPoint { r, ..p }, v), omega, energy))
}

/// Equilateral homothety starting at size `r0` with radial speed `rdot0`.
/// Returns the start state and its energy.
pub fn lagrange_homothety(mc: &MassConfig, potential: PotentialKind, r0: f64, rdot0: f64) -> Result<(FlowState, f64)> {
    let (p, w) = equilateral_w(mc, potential)?;
    let mut v: Vec4 = ZERO_VEC;
    v[0] = rdot0;
    let energy = 0.5 * rdot0 * rdot0 - w / r0.powf(potential.exponent());
    Ok((FlowState::trajectory(ChartPoint { r: r0, ..p }, v), energy))
}

/// Exact collision time of the inbound equal-mass inverse-square homothety
/// with `kappa = rdot^2 - 6 G m^3 / r^2`, written without cancellation so
/// that `kappa -> 0` is smooth.
pub fn homothety_collision_time(r0: f64, kappa: f64, gm3: f64) -> Result<f64> {
    let disc = 6.0 * gm3 + kappa * r0 * r0;
    if !(r0 > 0.0) || disc < 0.0 {
        return Err(Error::InvalidArgument(format!("no inbound homothety with r0 = {r0}, kappa = {kappa}")));
    }
    Ok(r0 * r0 / (disc.sqrt() + (6.0 * gm3).sqrt()))
}

/// The `kappa -> 0` approximation `r0^2 / (2 sqrt(6 G m^3))`.
pub fn homothety_collision_time_zero_energy(r0: f64, gm3: f64) -> f64 {
    r0 * r0 / (2.0 * (6.0 * gm3).sqrt())
}

/// Numerical solution of `r^3 r'' = -6 G m^3` (inbound) together with the JM
/// arc length `s' = sqrt(2) (E + 3 G m^3 / r^2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialInfall {
    /// Time at which `r` first reaches `r_stop`.
    pub t_stop: f64,
    /// `(t, s)` samples.
    pub arc: Vec<(f64, f64)>,
}

pub fn radial_infall(
    r0: f64,
    kappa: f64,
    gm3: f64,
    r_stop: f64,
    sample_times: &[f64],
    tol: &Tolerances,
) -> Result<RadialInfall> {
    let rdot0 = -(kappa + 6.0 * gm3 / (r0 * r0)).sqrt();
    let energy = 0.5 * kappa;
    let rhs = |_: f64, y: &[f64], d: &mut [f64]| -> Result<()> {
        let r = y[0];
        if !(r > 0.0) {
            return Err(Error::ZeroSize);
        }
        d[0] = y[1];
        d[1] = -6.0 * gm3 / (r * r * r);
        d[2] = 2f64.sqrt() * (energy + 3.0 * gm3 / (r * r));
        Ok(())
    };
    let ev = Event::new(StopStatus::CollisionThreshold, move |_, y: &[f64]| y[0] - r_stop);
    let mut outs = sample_times.to_vec();
    outs.push(1e3 * (1.0 + homothety_collision_time(r0, kappa, gm3)?));
    let sol = integrate(rhs, 0.0, &[r0, rdot0, 0.0], &outs, &[ev], tol)?;
    if sol.status != StopStatus::CollisionThreshold {
        return Err(Error::Integration(format!("infall ended with {}", sol.status)));
    }
    let n = sol.t.len() - 1;
    Ok(RadialInfall { t_stop: sol.t[n], arc: sol.t[..n].iter().zip(&sol.y[..n]).map(|(t, y)| (*t, y[2])).collect() })
}

/// Least-squares slope of `s` against `-log(1 - t / t_c)`.
pub fn log_slope(arc: &[(f64, f64)], t_c: f64) -> f64 {
    let pts: Vec<(f64, f64)> = arc.iter().map(|&(t, s)| (-(1.0 - t / t_c).ln(), s)).collect();
    let n = pts.len() as f64;
    let (mx, my) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0 / n, a.1 + p.1 / n));
    let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + (p.0 - mx) * (p.1 - my), a.1 + (p.0 - mx).powi(2)));
    sxy / sxx
}

/// `max |I'' - 4E|` over interior samples with `I = r^2`, using the
/// three-point second difference on the (possibly non-uniform) clock.
/// Meaningful for inverse-square trajectories.
pub fn lagrange_jacobi_residual(path: &PathRecord, energy: f64) -> Result<f64> {
    let s = &path.samples;
    if s.len() < 3 {
        return Err(Error::InvalidArgument("need at least three samples".into()));
    }
    let mut worst = 0.0f64;
    for w in s.windows(3) {
        let (t0, t1, t2) = (w[0].clock, w[1].clock, w[2].clock);
        let (i0, i1, i2) = (w[0].point.r.powi(2), w[1].point.r.powi(2), w[2].point.r.powi(2));
        let (h0, h1) = (t1 - t0, t2 - t1);
        let idd = 2.0 * (h0 * i2 - (h0 + h1) * i1 + h1 * i0) / (h0 * h1 * (h0 + h1));
        worst = worst.max((idd - 4.0 * energy).abs());
    }
    Ok(worst)
}

/// Angular part of the geodesic equation along a radial curve at `(eta, xi2)`:
/// `max_a |Gamma^a_rr|` at `r` for the JM metric. Zero exactly at critical
/// points of the angular potential.
pub fn radial_curve_residual(metric: &JmMetric, p: &ChartPoint) -> Result<f64> {
    let conn = crate::curvature::christoffel(metric, &p.coords())?;
    Ok((1..conn.dim).map(|a| conn.gamma[a][0][0].abs()).fold(0.0, f64::max))
}
