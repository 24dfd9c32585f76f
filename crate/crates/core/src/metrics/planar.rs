//! Small reference metrics with known curvature, used as oracles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Vec4, ZERO_VEC};

use super::{MetricComponents, MetricField};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PlanarPotential {
    /// `V = -k / r`.
    Kepler {
        k: f64,
    },
    /// `V = k r^2 / 2`.
    Oscillator {
        k: f64,
    },
    Free,
}

impl PlanarPotential {
    /// `V` and `dV/dr`.
    pub fn radial(&self, r: f64) -> (f64, f64) {
        match *self {
            PlanarPotential::Kepler { k } => (-k / r, k / (r * r)),
            PlanarPotential::Oscillator { k } => (0.5 * k * r * r, k * r),
            PlanarPotential::Free => (0.0, 0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlanarChart {
    /// `(x, y)`.
    Cartesian,
    /// `(r, theta)`.
    Polar,
}

/// JM metric `m (E - V) (dx^2 + dy^2)` of a particle in a central potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarJm {
    pub mass: f64,
    pub energy: f64,
    pub potential: PlanarPotential,
    pub chart: PlanarChart,
}

impl PlanarJm {
    pub fn new(mass: f64, energy: f64, potential: PlanarPotential) -> Self {
        Self { mass, energy, potential, chart: PlanarChart::Cartesian }
    }

    pub fn polar(mut self) -> Self {
        self.chart = PlanarChart::Polar;
        self
    }

    /// Known scalar curvature at radius `r`.
    pub fn scalar_curvature(&self, r: f64) -> f64 {
        let (m, e) = (self.mass, self.energy);
        match self.potential {
            PlanarPotential::Kepler { k } => -e * k / (m * (k + e * r).powi(3)),
            PlanarPotential::Oscillator { k } => 16.0 * e * k / (m * (2.0 * e - k * r * r).powi(3)),
            PlanarPotential::Free => 0.0,
        }
    }
}

impl MetricField for PlanarJm {
    fn dim(&self) -> usize {
        2
    }

    fn components(&self, x: &Vec4) -> Result<MetricComponents> {
        let mut k = MetricComponents::zero(2);
        let mut dphi = ZERO_VEC;
        let r = match self.chart {
            PlanarChart::Cartesian => x[0].hypot(x[1]),
            PlanarChart::Polar => x[0],
        };
        let (v, dv) = self.potential.radial(r);
        let phi = self.mass * (self.energy - v);
        if !(phi > 0.0) {
            return Err(Error::OutsideHill { conformal: phi });
        }
        match self.chart {
            PlanarChart::Cartesian => {
                k.g[0][0] = 1.0;
                k.g[1][1] = 1.0;
                if r > 0.0 {
                    dphi[0] = -self.mass * dv * x[0] / r;
                    dphi[1] = -self.mass * dv * x[1] / r;
                }
            }
            PlanarChart::Polar => {
                k.g[0][0] = 1.0;
                k.g[1][1] = r * r;
                k.dg[0][1][1] = 2.0 * r;
                dphi[0] = -self.mass * dv;
            }
        }
        Ok(MetricComponents::conformal(phi, &dphi, &k))
    }
}

/// Round sphere of radius `radius` in `(theta, phi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoundSphere {
    pub radius: f64,
}

impl MetricField for RoundSphere {
    fn dim(&self) -> usize {
        2
    }

    fn components(&self, x: &Vec4) -> Result<MetricComponents> {
        let r2 = self.radius * self.radius;
        let mut c = MetricComponents::zero(2);
        c.g[0][0] = r2;
        c.g[1][1] = r2 * x[0].sin().powi(2);
        c.dg[0][1][1] = r2 * (2.0 * x[0]).sin();
        Ok(c)
    }
}

/// `unit * eta^{-n} (d eta^2 + eta^2 d xi^2)`: the binary-collision profile of
/// a `1 / |x|^n` pair potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawProbe {
    pub n: f64,
    pub unit: f64,
}

impl MetricField for PowerLawProbe {
    fn dim(&self) -> usize {
        2
    }

    fn components(&self, x: &Vec4) -> Result<MetricComponents> {
        let (eta, n, u) = (x[0], self.n, self.unit);
        if !(eta > 0.0) {
            return Err(Error::ChartSingular { eta });
        }
        let mut c = MetricComponents::zero(2);
        c.g[0][0] = u * eta.powf(-n);
        c.g[1][1] = u * eta.powf(2.0 - n);
        c.dg[0][0][0] = -n * u * eta.powf(-n - 1.0);
        c.dg[0][1][1] = (2.0 - n) * u * eta.powf(1.0 - n);
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::finite_difference_dg;

    #[test]
    fn derivatives_match_differences() {
        let fields: Vec<Box<dyn MetricField>> = vec![
            Box::new(PlanarJm::new(1.0, 1.0, PlanarPotential::Kepler { k: 1.0 })),
            Box::new(PlanarJm::new(1.0, 2.0, PlanarPotential::Oscillator { k: 0.5 }).polar()),
            Box::new(RoundSphere { radius: 2.0 }),
            Box::new(PowerLawProbe { n: 1.0, unit: 1.0 }),
        ];
        let x = [0.6, 0.8, 0.0, 0.0];
        for f in &fields {
            let c = f.components(&x).unwrap();
            let fd = finite_difference_dg(f.as_ref(), &x, 1e-6).unwrap();
            for a in 0..2 {
                for i in 0..2 {
                    for j in 0..2 {
                        assert!((c.dg[a][i][j] - fd[a][i][j]).abs() < 1e-7);
                    }
                }
            }
        }
    }
}
