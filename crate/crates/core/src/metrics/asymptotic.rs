//! Leading-order metrics near the 1-2 binary collision (equal masses).

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{Vec4, ZERO_VEC};

use super::{MetricComponents, MetricField};

const SQRT2: f64 = std::f64::consts::SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NearCollisionKind {
    /// `(eta, xi2)`: `G m^3 / (2 eta^2) (d eta^2 + 4 eta^2 d xi2^2)`.
    PairS2,
    /// `(kappa, lambda, chi)`: `G m^3 ((2/rho0^2) e^{2 sqrt2 lambda} d kappa^2 + d lambda^2 + d chi^2 / 2)`.
    PairR3,
    /// `(kappa, lambda, xi-, xi+)`: `G m^3 (d kappa^2/(2 eta^2) + d lambda^2 + d xi-^2/(2 eta^2) + d xi+^2/2)`
    /// with `eta = eta0 e^{-sqrt2 lambda}`.
    PairC2,
    /// `(lambda, xi-, xi+)`: the C2 form without `kappa`.
    PairS3,
    /// Newtonian C2 metric in Hopf coordinates `(r, eta, xi1, xi2)`.
    NewtonianC2,
    /// Newtonian R3 metric in `(r, eta, xi2)`.
    NewtonianR3,
}

impl NearCollisionKind {
    pub const ALL: [NearCollisionKind; 6] = [
        NearCollisionKind::PairS2,
        NearCollisionKind::PairR3,
        NearCollisionKind::PairC2,
        NearCollisionKind::PairS3,
        NearCollisionKind::NewtonianC2,
        NearCollisionKind::NewtonianR3,
    ];

    pub fn dim(self) -> usize {
        match self {
            NearCollisionKind::PairS2 => 2,
            NearCollisionKind::PairC2 | NearCollisionKind::NewtonianC2 => 4,
            _ => 3,
        }
    }

    pub fn coordinate_names(self) -> &'static [&'static str] {
        match self {
            NearCollisionKind::PairS2 => &["eta", "xi2"],
            NearCollisionKind::PairR3 => &["kappa", "lambda", "chi"],
            NearCollisionKind::PairC2 => &["kappa", "lambda", "xi_minus", "xi_plus"],
            NearCollisionKind::PairS3 => &["lambda", "xi_minus", "xi_plus"],
            NearCollisionKind::NewtonianC2 => &["r", "eta", "xi1", "xi2"],
            NearCollisionKind::NewtonianR3 => &["r", "eta", "xi2"],
        }
    }
}

/// An asymptotic near-collision metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NearCollisionMetric {
    pub kind: NearCollisionKind,
    /// `G m^3` for the pair kinds, `G m^{5/2}` for the Newtonian kinds.
    pub unit: f64,
    /// `rho0` for [`NearCollisionKind::PairR3`], `eta0` for PairC2/PairS3.
    pub scale: f64,
}

impl NearCollisionMetric {
    pub fn new(kind: NearCollisionKind) -> Self {
        Self { kind, unit: 1.0, scale: 0.1 }
    }
}

impl MetricField for NearCollisionMetric {
    fn dim(&self) -> usize {
        self.kind.dim()
    }

    fn components(&self, x: &Vec4) -> Result<MetricComponents> {
        let u = self.unit;
        let mut k = MetricComponents::zero(self.dim());
        let mut dphi = ZERO_VEC;
        let phi;
        match self.kind {
            NearCollisionKind::PairS2 => {
                let eta = x[0];
                phi = 1.0;
                k.g[0][0] = u / (2.0 * eta * eta);
                k.g[1][1] = 2.0 * u;
                k.dg[0][0][0] = -u / eta.powi(3);
            }
            NearCollisionKind::PairR3 => {
                phi = 1.0;
                let f = u * 2.0 / (self.scale * self.scale) * (2.0 * SQRT2 * x[1]).exp();
                k.g[0][0] = f;
                k.g[1][1] = u;
                k.g[2][2] = 0.5 * u;
                k.dg[1][0][0] = 2.0 * SQRT2 * f;
            }
            NearCollisionKind::PairC2 | NearCollisionKind::PairS3 => {
                phi = 1.0;
                let (il, warped): (usize, &[usize]) =
                    if self.kind == NearCollisionKind::PairC2 { (1, &[0, 2]) } else { (0, &[1]) };
                let f = u * (2.0 * SQRT2 * x[il]).exp() / (2.0 * self.scale * self.scale);
                for &i in warped {
                    k.g[i][i] = f;
                    k.dg[il][i][i] = 2.0 * SQRT2 * f;
                }
                k.g[il][il] = u;
                let last = self.dim() - 1;
                k.g[last][last] = 0.5 * u;
            }
            NearCollisionKind::NewtonianC2 => {
                let (r, eta) = (x[0], x[1]);
                phi = u / (SQRT2 * eta * r);
                dphi[0] = -phi / r;
                dphi[1] = -phi / eta;
                let c = 1.0 - 2.0 * eta * eta;
                k.g[0][0] = 1.0;
                for i in 1..4 {
                    k.g[i][i] = r * r;
                    k.dg[0][i][i] = 2.0 * r;
                }
                for (i, j) in [(2, 3), (3, 2)] {
                    k.g[i][j] = -r * r * c;
                    k.dg[0][i][j] = -2.0 * r * c;
                    k.dg[1][i][j] = 4.0 * r * r * eta;
                }
            }
            NearCollisionKind::NewtonianR3 => {
                let (r, eta) = (x[0], x[1]);
                let bracket = 1.0 / (SQRT2 * eta) + 2.0 * (2.0f64 / 3.0).sqrt();
                phi = u / r * bracket;
                dphi[0] = -phi / r;
                dphi[1] = -u / r / (SQRT2 * eta * eta);
                k.g[0][0] = 1.0;
                k.g[1][1] = r * r;
                k.g[2][2] = 4.0 * r * r * eta * eta;
                k.dg[0][1][1] = 2.0 * r;
                k.dg[0][2][2] = 8.0 * r * eta * eta;
                k.dg[1][2][2] = 8.0 * r * r * eta;
            }
        }
        Ok(MetricComponents::conformal(phi, &dphi, &k))
    }

    fn coordinate_names(&self) -> Vec<String> {
        self.kind.coordinate_names().iter().map(|s| s.to_string()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::finite_difference_dg;

    #[test]
    fn derivatives_match_differences() {
        let x = [0.7, 0.05, 0.3, 0.9];
        for kind in NearCollisionKind::ALL {
            let m = NearCollisionMetric::new(kind);
            let mut y = x;
            if kind == NearCollisionKind::PairS2 {
                y[0] = 0.05;
            }
            let c = m.components(&y).unwrap();
            let fd = finite_difference_dg(&m, &y, 1e-6).unwrap();
            for a in 0..kind.dim() {
                for i in 0..kind.dim() {
                    for j in 0..kind.dim() {
                        let scale = c.g[i][i].abs().max(1.0);
                        assert!((c.dg[a][i][j] - fd[a][i][j]).abs() < 1e-6 * scale, "{kind:?}");
                    }
                }
            }
        }
    }
}
