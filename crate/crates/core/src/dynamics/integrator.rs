//! Adaptive Dormand-Prince 5(4) integrator with exact output times, step
//! rejection on right-hand-side failures, and terminal events located by
//! bisection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Why an integration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopStatus {
    Completed,
    HillBoundary,
    CollisionThreshold,
    MaxSteps,
}

impl std::fmt::Display for StopStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StopStatus::Completed => "completed",
            StopStatus::HillBoundary => "hill-boundary",
            StopStatus::CollisionThreshold => "collision-threshold",
            StopStatus::MaxSteps => "max-steps",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Smallest step before a failing right-hand side ends the run.
    pub h_min: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-12, max_steps: 1_000_000, h_min: 1e-14 }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

pub type EventFn<'a> = Box<dyn Fn(f64, &[f64]) -> f64 + 'a>;

/// Terminal event: the run stops where `value` first becomes `<= 0`.
pub struct Event<'a> {
    pub value: EventFn<'a>,
    pub status: StopStatus,
}

impl<'a> Event<'a> {
    pub fn new(status: StopStatus, value: impl Fn(f64, &[f64]) -> f64 + 'a) -> Self {
        Self { value: Box::new(value), status }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    /// Output times actually reached, then the stop time if it is not one of them.
    pub t: Vec<f64>,
    pub y: Vec<Vec<f64>>,
    pub status: StopStatus,
    pub stats: StepStats,
}

impl Solution {
    pub fn last(&self) -> (f64, &[f64]) {
        (*self.t.last().unwrap(), self.y.last().unwrap())
    }
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order weights minus embedded fourth-order weights.
const E: [f64; 7] =
    [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];

/// One trial step: returns the new state and the scaled error norm.
fn trial<F>(
    rhs: &mut F,
    t: f64,
    y: &[f64],
    k0: &[f64],
    h: f64,
    tol: &Tolerances,
    stats: &mut StepStats,
) -> Result<(Vec<f64>, f64, Vec<f64>)>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    let n = y.len();
    let mut k = vec![vec![0.0; n]; 7];
    k[0].copy_from_slice(k0);
    let mut tmp = vec![0.0; n];
    for s in 1..7 {
        for i in 0..n {
            tmp[i] = y[i] + h * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>();
        }
        stats.rhs_evals += 1;
        rhs(t + C[s] * h, &tmp, &mut k[s])?;
    }
    // Stage 7 is evaluated at the fifth-order solution (FSAL).
    let y_new = tmp;
    let mut err = 0.0;
    for i in 0..n {
        let e = h * (0..7).map(|j| E[j] * k[j][i]).sum::<f64>();
        let sc = tol.atol + tol.rtol * y[i].abs().max(y_new[i].abs());
        err += (e / sc).powi(2);
    }
    let err = (err / n as f64).sqrt();
    if !err.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
        return Err(Error::Integration("non-finite state".into()));
    }
    Ok((y_new, err, k.swap_remove(6)))
}

fn stop_status_for(e: &Error) -> Option<StopStatus> {
    match e {
        Error::OutsideHill { .. } => Some(StopStatus::HillBoundary),
        Error::CollisionPole { .. } | Error::ZeroSize | Error::ChartSingular { .. } => {
            Some(StopStatus::CollisionThreshold)
        }
        _ => None,
    }
}

/// Integrates `y' = rhs(t, y)` from `t0` through every time in `outputs`
/// (increasing, all `> t0`), stopping early at the first triggered event.
pub fn integrate<F>(
    mut rhs: F,
    t0: f64,
    y0: &[f64],
    outputs: &[f64],
    events: &[Event<'_>],
    tol: &Tolerances,
) -> Result<Solution>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    let n = y0.len();
    let mut stats = StepStats::default();
    let mut sol = Solution { t: Vec::new(), y: Vec::new(), status: StopStatus::Completed, stats };
    if outputs.windows(2).any(|w| w[1] <= w[0]) || outputs.first().is_some_and(|&t| t <= t0) {
        return Err(Error::InvalidArgument("output times must increase from t0".into()));
    }
    let Some(&t_end) = outputs.last() else {
        return Ok(sol);
    };

    let mut t = t0;
    let mut y = y0.to_vec();
    let mut k0 = vec![0.0; n];
    rhs(t, &y, &mut k0)?;
    stats.rhs_evals += 1;

    // Initial step from the derivative scale.
    let d0 = norm(&y, &y, tol);
    let d1 = norm(&k0, &y, tol);
    let mut h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h = h.min(t_end - t0);

    let mut next_out = 0;
    loop {
        if stats.accepted >= tol.max_steps {
            sol.t.push(t);
            sol.y.push(y);
            sol.status = StopStatus::MaxSteps;
            break;
        }
        let target = outputs[next_out];
        let h_try = h.min(target - t);
        let lands = h_try >= target - t;
        let attempt = trial(&mut rhs, t, &y, &k0, h_try, tol, &mut stats);
        let (y_new, err, k_new) = match attempt {
            Ok(v) => v,
            Err(e) => {
                let status = stop_status_for(&e);
                if h_try * 0.5 < tol.h_min.max(1e-15 * t.abs()) {
                    match status {
                        Some(s) => {
                            sol.t.push(t);
                            sol.y.push(y);
                            sol.status = s;
                            break;
                        }
                        None => return Err(e),
                    }
                }
                if status.is_none() && !matches!(e, Error::Integration(_)) {
                    return Err(e);
                }
                stats.rejected += 1;
                h = h_try * 0.5;
                continue;
            }
        };
        if err > 1.0 {
            stats.rejected += 1;
            h = h_try * (0.9 * err.powf(-0.2)).max(0.2);
            continue;
        }
        stats.accepted += 1;
        let t_new = if lands { target } else { t + h_try };

        if let Some((idx, _)) = events.iter().enumerate().find(|(_, ev)| (ev.value)(t_new, &y_new) <= 0.0) {
            let (te, ye) = locate_event(&mut rhs, t, &y, &k0, h_try, &events[idx], tol, &mut stats)?;
            sol.t.push(te);
            sol.y.push(ye);
            sol.status = events[idx].status;
            break;
        }

        t = t_new;
        y = y_new;
        k0 = k_new;
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h = h_try * factor;
        if lands {
            sol.t.push(t);
            sol.y.push(y.clone());
            next_out += 1;
            if next_out == outputs.len() {
                break;
            }
        }
    }
    sol.stats = stats;
    Ok(sol)
}

fn norm(v: &[f64], y: &[f64], tol: &Tolerances) -> f64 {
    let s: f64 = v.iter().zip(y).map(|(a, b)| (a / (tol.atol + tol.rtol * b.abs())).powi(2)).sum();
    (s / v.len() as f64).sqrt()
}

/// Bisects the step size until the event value is bracketed within
/// `1e-14 (1 + |t|)`; returns the first state with value `<= 0`.
#[allow(clippy::too_many_arguments)]
fn locate_event<F>(
    rhs: &mut F,
    t: f64,
    y: &[f64],
    k0: &[f64],
    h: f64,
    event: &Event<'_>,
    tol: &Tolerances,
    stats: &mut StepStats,
) -> Result<(f64, Vec<f64>)>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    let (mut lo, mut hi) = (0.0, h);
    let mut best = None;
    while hi - lo > 1e-14 * (1.0 + t.abs()) {
        let mid = 0.5 * (lo + hi);
        match trial(rhs, t, y, k0, mid, tol, stats) {
            Ok((ym, _, _)) if (event.value)(t + mid, &ym) > 0.0 => lo = mid,
            Ok((ym, _, _)) => {
                hi = mid;
                best = Some(ym);
            }
            Err(_) => hi = mid,
        }
    }
    let y_hi = match best {
        Some(v) => v,
        None => trial(rhs, t, y, k0, hi, tol, stats).map(|v| v.0)?,
    };
    Ok((t + hi, y_hi))
}
