//! Curvature values at special configurations, including limits at the
//! collision and Euler points where the Hopf chart or the metric degenerates.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

use serde::Serialize;

use crate::coords::{ChartPoint, Space, SpecialPoint};
use crate::error::Result;
use crate::metrics::{JmMetric, PotentialKind};

use super::riemann;

/// Value at `t = 0` of the polynomial through `(t_k, y_k)`.
pub fn neville_extrapolate(t: &[f64], y: &[f64]) -> f64 {
    let mut p = y.to_vec();
    let n = p.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (t[i + m] * p[i] - t[i] * p[i + 1]) / (t[i + m] - t[i]);
        }
    }
    p[0]
}

/// Limit of `f(t)` as `t -> 0+`, sampling `t0 / 2^k` for `k < levels`.
pub fn limit_along(f: impl Fn(f64) -> Result<f64>, t0: f64, levels: usize) -> Result<f64> {
    let t: Vec<f64> = (0..levels).map(|k| t0 / 2f64.powi(k as i32)).collect();
    let y = t.iter().map(|&ti| f(ti)).collect::<Result<Vec<_>>>()?;
    Ok(neville_extrapolate(&t, &y))
}

/// Curvature quantities tabulated at special points (equal masses, E = 0,
/// inverse-square, units `1/G m^3`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LimitQuantity {
    KC2REta,
    KC2RXi,
    KC2EtaXi,
    KC2RXi1,
    KR3RXi2,
    KS3EtaXi2,
    KS3EtaXi1,
    KS3Xi1Xi2,
    RC2,
    RR3,
    RS3,
    RS2,
}

impl LimitQuantity {
    pub const ALL: [LimitQuantity; 12] = [
        LimitQuantity::KC2REta,
        LimitQuantity::KC2RXi,
        LimitQuantity::KC2EtaXi,
        LimitQuantity::KC2RXi1,
        LimitQuantity::KR3RXi2,
        LimitQuantity::KS3EtaXi2,
        LimitQuantity::KS3EtaXi1,
        LimitQuantity::KS3Xi1Xi2,
        LimitQuantity::RC2,
        LimitQuantity::RR3,
        LimitQuantity::RS3,
        LimitQuantity::RS2,
    ];

    pub fn label(self) -> &'static str {
        match self {
            LimitQuantity::KC2REta => "K_C2(r,eta)",
            LimitQuantity::KC2RXi => "K_C2(r,xi)",
            LimitQuantity::KC2EtaXi => "K_C2(eta,xi)",
            LimitQuantity::KC2RXi1 => "K_C2(r,xi1)",
            LimitQuantity::KR3RXi2 => "K_R3(r,xi2)",
            LimitQuantity::KS3EtaXi2 => "K_S3(eta,xi2)",
            LimitQuantity::KS3EtaXi1 => "K_S3(eta,xi1)",
            LimitQuantity::KS3Xi1Xi2 => "K_S3(xi1,xi2)",
            LimitQuantity::RC2 => "R_C2",
            LimitQuantity::RR3 => "R_R3",
            LimitQuantity::RS3 => "R_S3",
            LimitQuantity::RS2 => "R_S2",
        }
    }

    fn space(self) -> Space {
        use LimitQuantity::*;
        match self {
            KC2REta | KC2RXi | KC2EtaXi | KC2RXi1 | RC2 => Space::C2,
            KR3RXi2 | RR3 => Space::R3,
            KS3EtaXi2 | KS3EtaXi1 | KS3Xi1Xi2 | RS3 => Space::S3,
            RS2 => Space::S2,
        }
    }

    /// Evaluates the quantity at `(eta, xi2)` with `r = 1`, `xi1 = 0`.
    pub fn evaluate(self, eta: f64, xi2: f64) -> Result<f64> {
        use LimitQuantity::*;
        let space = self.space();
        let metric = JmMetric::standard(space, PotentialKind::InverseSquare)?;
        let p = ChartPoint { space, r: 1.0, eta, xi1: 0.0, xi2 };
        let curv = riemann(&metric, &p.coords())?;
        let c = (2.0 * eta).cos();
        let e = |i: usize| super::unit(i);
        match self {
            KC2REta => curv.coordinate_sectional(0, 1),
            KC2RXi => curv.sectional(&e(0), &[0.0, 0.0, c, 1.0]),
            KC2EtaXi => curv.sectional(&e(1), &[0.0, 0.0, c, 1.0]),
            KC2RXi1 => curv.coordinate_sectional(0, 2),
            KR3RXi2 => curv.coordinate_sectional(0, 2),
            KS3EtaXi2 => curv.coordinate_sectional(0, 2),
            KS3EtaXi1 => curv.coordinate_sectional(0, 1),
            KS3Xi1Xi2 => curv.coordinate_sectional(1, 2),
            RC2 | RR3 | RS3 | RS2 => Ok(curv.scalar),
        }
    }
}

/// How a special point is reached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Approach {
    /// Evaluated at the point itself.
    Direct,
    /// `eta -> eta*` with `xi2` held fixed at the given value.
    EtaTo { xi2: f64 },
    /// `xi2 -> xi2*` with `eta` held fixed at the point's value.
    Xi2To,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitEntry {
    pub point: SpecialPoint,
    pub quantity: LimitQuantity,
    pub label: &'static str,
    pub approach: Approach,
    pub value: f64,
    /// Reference value where one is known.
    pub expected: Option<f64>,
}

impl LimitEntry {
    pub fn error(&self) -> Option<f64> {
        self.expected.map(|e| (self.value - e).abs())
    }
}

/// Known values: `(point, quantity, value)`.
pub fn expected_value(point: SpecialPoint, q: LimitQuantity) -> Option<f64> {
    use LimitQuantity::*;
    use SpecialPoint::*;
    let v = match (point, q) {
        (L4 | L5, KC2REta | KC2RXi | KR3RXi2) => -2.0 / 3.0,
        (L4 | L5, KC2EtaXi | KS3EtaXi2) => -1.0,
        (L4 | L5, KS3EtaXi1 | KS3Xi1Xi2) => -1.0 / 3.0,
        (L4 | L5, KC2RXi1) => 0.0,
        (L4 | L5, RC2) => -6.0,
        (L4 | L5, RR3) => -8.0 / 3.0,
        (L4 | L5, RS3) => -10.0 / 3.0,
        (L4 | L5, RS2) => 0.0,
        (C3, KC2REta | KS3EtaXi2 | KS3EtaXi1) => -2.0,
        (C3, KC2EtaXi | KC2RXi | KR3RXi2 | KS3Xi1Xi2) => 0.0,
        (C3, RC2) => -12.0,
        (C3, RR3 | RS3) => -4.0,
        (C3, RS2) => 0.0,
        _ => return None,
    };
    Some(v)
}

const LEVELS: usize = 6;
const T0: f64 = 0.08;

fn entry(point: SpecialPoint, q: LimitQuantity, approach: Approach, value: f64) -> LimitEntry {
    LimitEntry { point, quantity: q, label: q.label(), approach, value, expected: expected_value(point, q) }
}

/// Table of curvature values at L4, L5 and limits at C1, C2, C3 and E3.
///
/// At C1 and C2 both approach directions are reported; no value is asserted
/// for either.
pub fn special_limits() -> Result<Vec<LimitEntry>> {
    let mut out = Vec::new();
    let generic_xi2 = 0.3;
    for q in LimitQuantity::ALL {
        for (pt, xi2) in [(SpecialPoint::L4, FRAC_PI_4), (SpecialPoint::L5, -FRAC_PI_4)] {
            let xi2 = if q.space().has_xi1() { xi2 } else { xi2.rem_euclid(std::f64::consts::PI) };
            out.push(entry(pt, q, Approach::Direct, q.evaluate(FRAC_PI_4, xi2)?));
        }
        let c3 = limit_along(|t| q.evaluate(t, generic_xi2), T0, LEVELS)?;
        out.push(entry(SpecialPoint::C3, q, Approach::EtaTo { xi2: generic_xi2 }, c3));
        for (pt, xi2c) in [(SpecialPoint::C1, 0.0), (SpecialPoint::C2, FRAC_PI_2)] {
            let along_eta = limit_along(|t| q.evaluate(FRAC_PI_3 - t, xi2c), T0, LEVELS)?;
            out.push(entry(pt, q, Approach::EtaTo { xi2: xi2c }, along_eta));
            let along_xi = limit_along(|t| q.evaluate(FRAC_PI_3, xi2c + t), T0, LEVELS)?;
            out.push(entry(pt, q, Approach::Xi2To, along_xi));
        }
        if matches!(q, LimitQuantity::RC2 | LimitQuantity::RR3 | LimitQuantity::RS3 | LimitQuantity::RS2) {
            let e3 = limit_along(|t| q.evaluate(FRAC_PI_2 - t, generic_xi2), T0, LEVELS)?;
            out.push(entry(SpecialPoint::E3, q, Approach::EtaTo { xi2: generic_xi2 }, e3));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neville_recovers_polynomials() {
        let t = [0.4, 0.2, 0.1, 0.05];
        let y: Vec<f64> = t.iter().map(|x| 3.0 - 2.0 * x + 5.0 * x * x * x).collect();
        assert!((neville_extrapolate(&t, &y) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn lagrange_values_direct() {
        for q in LimitQuantity::ALL {
            let v = q.evaluate(FRAC_PI_4, FRAC_PI_4).unwrap();
            let want = expected_value(SpecialPoint::L4, q).unwrap();
            assert!((v - want).abs() < 1e-6, "{}: {v} vs {want}", q.label());
        }
    }
}
