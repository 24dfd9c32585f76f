//! O'Neill's formula for the submersions C2 -> R3 (rotations) and
//! C2 -> S3 (scaling, zero energy):
//! `K_N(dX, dY) = K_M(X, Y) + (3/4) |[X, Y]^V|^2 / Ar(X, Y)^2`.

use serde::Serialize;

use crate::coords::{ChartPoint, Space};
use crate::error::{Error, Result};
use crate::linalg::Vec4;
use crate::metrics::JmMetric;

use super::riemann;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum OneillPlane {
    /// `(d_r, d_eta)` under C2 -> R3.
    REta,
    /// `(d_r, d_xi)` with `d_xi = cos 2eta d_xi1 + d_xi2`, under C2 -> R3.
    RXi,
    /// `(d_eta, d_xi)` under C2 -> R3; `[d_xi, d_eta]^V = -2 sin 2eta d_xi1`.
    EtaXi,
    /// `(d_eta, d_xi2)` under C2 -> S3.
    EtaXi2,
    /// `(d_eta, d_xi1)` under C2 -> S3.
    EtaXi1,
    /// `(d_xi1, d_xi2)` under C2 -> S3.
    Xi1Xi2,
}

impl OneillPlane {
    pub const ALL: [OneillPlane; 6] = [
        OneillPlane::REta,
        OneillPlane::RXi,
        OneillPlane::EtaXi,
        OneillPlane::EtaXi2,
        OneillPlane::EtaXi1,
        OneillPlane::Xi1Xi2,
    ];

    pub fn base(self) -> Space {
        match self {
            OneillPlane::REta | OneillPlane::RXi | OneillPlane::EtaXi => Space::R3,
            _ => Space::S3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OneillResidual {
    pub plane: OneillPlane,
    /// Sectional curvature of the horizontal plane upstairs.
    pub k_total: f64,
    /// Sectional curvature of its image in the quotient.
    pub k_base: f64,
    /// `(3/4) |[X, Y]^V|^2 / Ar^2`.
    pub correction: f64,
    pub residual: f64,
}

/// Checks O'Neill's formula at the C2 point `p` for `metric` (a C2 metric).
pub fn oneill_residual(metric: &JmMetric, p: &ChartPoint, plane: OneillPlane) -> Result<OneillResidual> {
    if metric.space != Space::C2 || p.space != Space::C2 {
        return Err(Error::InvalidArgument("O'Neill checks start from a C2 metric and point".into()));
    }
    let base_space = plane.base();
    let base = JmMetric { space: base_space, ..*metric };
    if base_space == Space::S3 {
        JmMetric::new(Space::S3, metric.potential, metric.energy, metric.masses)?;
    }
    let c = (2.0 * p.eta).cos();
    let top = riemann(metric, &p.coords())?;
    let bottom = riemann(&base, &p.project(base_space)?.coords())?;

    let (x, y, bx, by) = match plane {
        OneillPlane::REta => ([1., 0., 0., 0.], [0., 1., 0., 0.], [1., 0., 0., 0.], [0., 1., 0., 0.]),
        OneillPlane::RXi => ([1., 0., 0., 0.], [0., 0., c, 1.], [1., 0., 0., 0.], [0., 0., 1., 0.]),
        OneillPlane::EtaXi => ([0., 1., 0., 0.], [0., 0., c, 1.], [0., 1., 0., 0.], [0., 0., 1., 0.]),
        OneillPlane::EtaXi2 => ([0., 1., 0., 0.], [0., 0., 0., 1.], [1., 0., 0., 0.], [0., 0., 1., 0.]),
        OneillPlane::EtaXi1 => ([0., 1., 0., 0.], [0., 0., 1., 0.], [1., 0., 0., 0.], [0., 1., 0., 0.]),
        OneillPlane::Xi1Xi2 => ([0., 0., 1., 0.], [0., 0., 0., 1.], [0., 1., 0., 0.], [0., 0., 1., 0.]),
    };
    let (x, y): (Vec4, Vec4) = (x, y);
    let k_total = top.sectional(&x, &y)?;
    let k_base = bottom.sectional(&bx, &by)?;
    let correction = if plane == OneillPlane::EtaXi {
        let g = top.metric();
        let bracket_sq = 4.0 * (2.0 * p.eta).sin().powi(2) * g[2][2];
        0.75 * bracket_sq / top.area_sq(&x, &y)
    } else {
        0.0
    };
    Ok(OneillResidual { plane, k_total, k_base, correction, residual: k_base - k_total - correction })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::PotentialKind;

    #[test]
    fn all_planes_at_generic_point() {
        let m = JmMetric::standard(Space::C2, PotentialKind::InverseSquare).unwrap();
        let p = ChartPoint::c2(1.2, 0.6, 0.4, 1.0);
        for plane in OneillPlane::ALL {
            let r = oneill_residual(&m, &p, plane).unwrap();
            assert!(r.residual.abs() < 1e-6, "{plane:?}: {r:?}");
        }
    }

    #[test]
    fn eta_xi_correction_is_three_over_w() {
        let m = JmMetric::standard(Space::C2, PotentialKind::InverseSquare).unwrap();
        let p = ChartPoint::c2(1.0, std::f64::consts::FRAC_PI_4, 0.0, std::f64::consts::FRAC_PI_4);
        let r = oneill_residual(&m, &p, OneillPlane::EtaXi).unwrap();
        assert!((r.correction - 1.0).abs() < 1e-12);
    }
}
