//! Zero-energy scalar curvatures in terms of the conformal factor and its
//! round-sphere gradient and Laplacian.

use serde::Serialize;

use crate::coords::{ChartPoint, Space};
use crate::error::{Error, Result};
use crate::metrics::{angular_potential, ConformalData, ConformalSource, Jet, JmMetric, PotentialKind};

/// `(|grad h|^2, Laplacian h)` on the radius-1/2 round sphere.
pub fn grad_laplace_round(data: &ConformalData) -> Result<(f64, f64)> {
    data.jet.round_grad_laplace(data.eta)
}

/// Scalar curvature of a zero-energy JM metric from its angular factor `W`
/// (`|grad W|^2 = g2`, `Laplacian W = lap`).
pub fn scalar_from_jet(space: Space, potential: PotentialKind, w: f64, g2: f64, lap: f64, r: f64) -> Result<f64> {
    let w3 = w * w * w;
    Ok(match (potential, space) {
        (PotentialKind::InverseSquare, Space::S2) => (8.0 * w * w + g2 - w * lap) / w3,
        (PotentialKind::InverseSquare, Space::C2) => 1.5 / w3 * (4.0 * w * w + g2 - 2.0 * w * lap),
        (PotentialKind::InverseSquare, Space::R3) => (16.0 * w * w + 3.0 * g2 - 4.0 * w * lap) / (2.0 * w3),
        (PotentialKind::InverseSquare, Space::S3) => (12.0 * w * w + 3.0 * g2 - 4.0 * w * lap) / (2.0 * w3),
        (PotentialKind::Newtonian, Space::C2) => 1.5 / (r * w3) * (3.0 * w * w + g2 - 2.0 * w * lap),
        (PotentialKind::Newtonian, Space::R3) => (30.0 * w * w + 6.0 * g2 - 8.0 * w * lap) / (4.0 * r * w3),
        (PotentialKind::Newtonian, _) => {
            return Err(Error::InvalidQuotient("scaling is not an isometry for the Newtonian potential"))
        }
    })
}

/// Closed-form scalar curvature of a zero-energy [`JmMetric`] at `p`.
pub fn scalar_closed_form(metric: &JmMetric, p: &ChartPoint) -> Result<f64> {
    if metric.energy != 0.0 {
        return Err(Error::InvalidArgument("closed forms hold only at E = 0".into()));
    }
    if metric.source != ConformalSource::ThreeBody {
        return Err(Error::InvalidArgument("closed forms need the three-body conformal factor".into()));
    }
    let w = angular_potential(&metric.masses, metric.potential, p.eta, p.xi2)?;
    let (g2, lap) = w.round_grad_laplace(p.eta)?;
    scalar_from_jet(metric.space, metric.potential, w.value, g2, lap, p.radius())
}

/// The factored equal-mass shape-sphere curvature `R_S2 = A B / C` (units `1/G m^3`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShapeSphereFactors {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl ShapeSphereFactors {
    pub fn value(&self) -> f64 {
        self.a * self.b / self.c
    }
}

pub fn shape_sphere_factors(eta: f64, xi2: f64) -> ShapeSphereFactors {
    let (s2e, c2e) = (2.0 * eta).sin_cos();
    let (c4e, c8e) = ((4.0 * eta).cos(), (8.0 * eta).cos());
    let (c2x, c4x, c8x) = ((2.0 * xi2).cos(), (4.0 * xi2).cos(), (8.0 * xi2).cos());
    let s2e2 = s2e * s2e;
    let a = 8.0 * eta.sin().powi(2) * ((c2e + 2.0).powi(2) - 3.0 * s2e2 * c2x * c2x);
    let b = -8.0 * s2e2 * s2e2 * c8x - 16.0 * s2e2 * c4x * (c4e - 29.0) + 236.0 * c4e - 3.0 * c8e + 727.0;
    let c = 3.0 * (2.0 * s2e2 * c4x + c4e - 13.0).powi(3);
    ShapeSphereFactors { a, b, c }
}

/// Equal-mass zero-energy scalar curvatures (units `1/G m^3`) and the
/// residuals of the identities linking them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RelationResidual {
    pub r_s2: f64,
    pub r_r3: f64,
    pub r_s3: f64,
    pub r_c2: f64,
    /// `R_C2 - (3 R_S2 - 3 (12 h^2 + |grad h|^2) / (2 h^3))`.
    pub c2_from_s2: f64,
    /// `R_R3 - (2 R_S2 - (16 h^2 + |grad h|^2) / (2 h^3))`.
    pub r3_from_s2: f64,
    /// `R_S3 - (2 R_S2 - (20 h^2 + |grad h|^2) / (2 h^3))`.
    pub s3_from_s2: f64,
    /// `R_C2 - (R_S3 - Laplacian h / h^2)`.
    pub c2_from_s3: f64,
    /// `R_S3 - (R_R3 - 2 / h)`.
    pub s3_from_r3: f64,
    /// `0 >= R_S2 > R_R3 >= R_S3 > R_C2`.
    pub chain: bool,
}

impl RelationResidual {
    pub fn max_residual(&self) -> f64 {
        [self.c2_from_s2, self.r3_from_s2, self.s3_from_s2, self.c2_from_s3, self.s3_from_r3]
            .iter()
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub fn scalar_relations_residual(eta: f64, xi2: f64) -> Result<RelationResidual> {
    let jet = angular_potential(&Default::default(), PotentialKind::InverseSquare, eta, xi2)?;
    relations_from_jet(&jet, eta)
}

/// As [`scalar_relations_residual`] but from a supplied jet of `h`.
pub fn relations_from_jet(jet: &Jet, eta: f64) -> Result<RelationResidual> {
    let (g2, lap) = jet.round_grad_laplace(eta)?;
    let h = jet.value;
    let h3 = h * h * h;
    let isq = PotentialKind::InverseSquare;
    let r_s2 = scalar_from_jet(Space::S2, isq, h, g2, lap, 1.0)?;
    let r_r3 = scalar_from_jet(Space::R3, isq, h, g2, lap, 1.0)?;
    let r_s3 = scalar_from_jet(Space::S3, isq, h, g2, lap, 1.0)?;
    let r_c2 = scalar_from_jet(Space::C2, isq, h, g2, lap, 1.0)?;
    Ok(RelationResidual {
        r_s2,
        r_r3,
        r_s3,
        r_c2,
        c2_from_s2: r_c2 - (3.0 * r_s2 - 1.5 * (12.0 * h * h + g2) / h3),
        r3_from_s2: r_r3 - (2.0 * r_s2 - (16.0 * h * h + g2) / (2.0 * h3)),
        s3_from_s2: r_s3 - (2.0 * r_s2 - (20.0 * h * h + g2) / (2.0 * h3)),
        c2_from_s3: r_c2 - (r_s3 - lap / (h * h)),
        s3_from_r3: r_s3 - (r_r3 - 2.0 / h),
        chain: r_s2 <= 1e-12 && r_s2 > r_r3 && r_r3 >= r_s3 && r_s3 > r_c2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coords::MassConfig;
    use crate::curvature::scalar;
    use crate::metrics::conformal_h;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn lagrange_values() {
        let r = scalar_relations_residual(FRAC_PI_4, FRAC_PI_4).unwrap();
        assert!(r.r_s2.abs() < 1e-12);
        assert!((r.r_c2 + 6.0).abs() < 1e-12);
        assert!((r.r_s3 + 10.0 / 3.0).abs() < 1e-12);
        assert!(r.chain);
        let d = conformal_h(FRAC_PI_4, FRAC_PI_4).unwrap();
        let (g2, lap) = grad_laplace_round(&d).unwrap();
        assert!(g2 < 1e-24 && (lap - 24.0).abs() < 1e-10);
    }

    #[test]
    fn laplacian_finite_near_euler() {
        let d = conformal_h(std::f64::consts::FRAC_PI_2 - 1e-4, 0.3).unwrap();
        assert!((d.laplacian.unwrap() - 66.0).abs() < 1e-3);
    }

    #[test]
    fn newtonian_at_lagrange() {
        let p = ChartPoint::r3(1.0, FRAC_PI_4, FRAC_PI_4);
        let m = JmMetric::standard(Space::R3, PotentialKind::Newtonian).unwrap();
        assert!((scalar_closed_form(&m, &p).unwrap() - 0.5).abs() < 1e-12);
        let m = JmMetric::standard(Space::C2, PotentialKind::Newtonian).unwrap();
        let p = ChartPoint::c2(2.0, FRAC_PI_4, 0.0, FRAC_PI_4);
        assert!((scalar_closed_form(&m, &p).unwrap() + 0.75).abs() < 1e-12);
    }

    #[test]
    fn factored_form_matches() {
        for (eta, xi2) in [(0.3, 0.2), (0.7, 1.1), (1.2, 2.0)] {
            let f = shape_sphere_factors(eta, xi2);
            let r = scalar_relations_residual(eta, xi2).unwrap().r_s2;
            assert!((f.value() - r).abs() < 1e-10);
            assert!(f.a >= 0.0 && f.b >= 0.0 && f.c < 0.0);
        }
    }

    #[test]
    fn closed_form_matches_engine_for_unequal_masses() {
        let mc = MassConfig::new(1.0, 2.0, 3.0, 1.0).unwrap();
        for space in Space::ALL {
            let m = JmMetric::new(space, PotentialKind::InverseSquare, 0.0, mc).unwrap();
            let p = ChartPoint { space, r: 1.3, eta: 0.6, xi1: 0.2, xi2: 1.0 };
            let want = scalar_closed_form(&m, &p).unwrap();
            let got = scalar(&m, &p.coords()).unwrap();
            assert!((want - got).abs() < 1e-6 * want.abs().max(1.0), "{space}: {want} vs {got}");
        }
    }
}
