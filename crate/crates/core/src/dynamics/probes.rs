//! JM length of coordinate curves running into a collision.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Vec4;
use crate::metrics::MetricField;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProbeTarget {
    /// Radial curve `r -> 0` at fixed angles (coordinate 0).
    Triple,
    /// Curve in coordinate `axis` towards `0` with the others fixed.
    Binary { axis: usize },
}

impl ProbeTarget {
    fn axis(self) -> usize {
        match self {
            ProbeTarget::Triple => 0,
            ProbeTarget::Binary { axis } => axis,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LengthSample {
    pub cutoff: f64,
    pub length: f64,
}

/// `L(eps) = int_eps^{x0} sqrt(g_aa) dx_a` along the probe curve from `start`,
/// for each cutoff. Integrated in `u = log x_a` by adaptive Simpson.
pub fn collision_distance_probe(
    mf: &dyn MetricField,
    start: &Vec4,
    target: ProbeTarget,
    cutoffs: &[f64],
) -> Result<Vec<LengthSample>> {
    let a = target.axis();
    if a >= mf.dim() {
        return Err(Error::Dimension { expected: mf.dim(), got: a + 1 });
    }
    let x0 = start[a];
    if !(x0 > 0.0) || cutoffs.iter().any(|&c| !(c > 0.0 && c < x0)) {
        return Err(Error::InvalidArgument("cutoffs must lie in (0, start)".into()));
    }
    let f = |u: f64| -> Result<f64> {
        let mut x = *start;
        x[a] = u.exp();
        let g = mf.components(&x)?;
        Ok(g.g[a][a].sqrt() * x[a])
    };
    let mut order: Vec<usize> = (0..cutoffs.len()).collect();
    order.sort_by(|&i, &j| cutoffs[j].total_cmp(&cutoffs[i]));
    let mut out = vec![LengthSample { cutoff: 0.0, length: 0.0 }; cutoffs.len()];
    let (mut upper, mut total) = (x0.ln(), 0.0);
    for i in order {
        let lower = cutoffs[i].ln();
        total += adaptive_simpson(&f, lower, upper, 1e-13)?;
        upper = lower;
        out[i] = LengthSample { cutoff: cutoffs[i], length: total };
    }
    Ok(out)
}

fn adaptive_simpson(f: &impl Fn(f64) -> Result<f64>, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    // Split into unit-length panels in log space first.
    let panels = ((b - a).abs().ceil() as usize).max(1);
    let h = (b - a) / panels as f64;
    let mut sum = 0.0;
    for k in 0..panels {
        let (lo, hi) = (a + k as f64 * h, a + (k + 1) as f64 * h);
        let (fa, fm, fb) = (f(lo)?, f(0.5 * (lo + hi))?, f(hi)?);
        let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        sum += simpson_rec(f, lo, hi, fa, fm, fb, whole, tol, 40)?;
    }
    Ok(sum)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec(
    f: &impl Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm)?, f(rm)?);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol * (1.0 + whole.abs()) {
        return Ok(left + right + delta / 15.0);
    }
    Ok(simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)?
        + simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)?)
}
