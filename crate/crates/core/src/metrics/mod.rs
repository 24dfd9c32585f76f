//! Jacobi-Maupertuis metric tensors with analytic first derivatives.
//!
//! Every metric here is `g = Phi * k` for a kinetic (cone or round) metric `k`
//! and a conformal factor `Phi`: `E + W / r^n` on C2 and R3, and `W` on the
//! zero-energy scale quotients S3 and S2.

pub mod asymptotic;
pub mod conformal;
pub mod planar;

use serde::{Deserialize, Serialize};

use crate::coords::{ChartPoint, MassConfig, Space};
use crate::error::{Error, Result};
use crate::linalg::{Mat4, Vec4, ZERO_MAT, ZERO_VEC};

pub use asymptotic::{NearCollisionKind, NearCollisionMetric};
pub use conformal::{
    angular_potential, conformal_h, conformal_v, htilde, newtonian_u, pair_terms, ConformalData, Jet, PairTerm,
};
pub use planar::{PlanarJm, PlanarPotential, PowerLawProbe, RoundSphere};

/// Below this `|sin 2 eta|` the Hopf chart is treated as degenerate.
pub const CHART_EPS: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PotentialKind {
    /// `V = -sum G m_i m_j / |x_i - x_j|^2`.
    InverseSquare,
    /// `V = -sum G m_i m_j / |x_i - x_j|`.
    Newtonian,
}

impl PotentialKind {
    pub fn exponent(self) -> f64 {
        match self {
            PotentialKind::InverseSquare => 2.0,
            PotentialKind::Newtonian => 1.0,
        }
    }
}

impl std::fmt::Display for PotentialKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PotentialKind::InverseSquare => "inverse-square",
            PotentialKind::Newtonian => "newtonian",
        })
    }
}

impl std::str::FromStr for PotentialKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "inverse-square" | "inverse_square" | "isq" | "1/r2" => Ok(PotentialKind::InverseSquare),
            "newtonian" | "newton" | "1/r" => Ok(PotentialKind::Newtonian),
            other => Err(Error::InvalidArgument(format!("unknown potential `{other}`"))),
        }
    }
}

/// Metric components at a point: `g[i][j]` and `dg[k][i][j] = d_k g_ij`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricComponents {
    pub dim: usize,
    pub g: Mat4,
    pub dg: [Mat4; 4],
}

impl MetricComponents {
    pub fn zero(dim: usize) -> Self {
        Self { dim, g: ZERO_MAT, dg: [ZERO_MAT; 4] }
    }

    /// `Phi * k` with product-rule derivatives.
    pub fn conformal(phi: f64, dphi: &Vec4, k: &MetricComponents) -> Self {
        let dim = k.dim;
        let mut out = Self::zero(dim);
        for i in 0..dim {
            for j in 0..dim {
                out.g[i][j] = phi * k.g[i][j];
                for a in 0..dim {
                    out.dg[a][i][j] = dphi[a] * k.g[i][j] + phi * k.dg[a][i][j];
                }
            }
        }
        out
    }
}

/// A metric tensor field on an open subset of `R^dim`.
pub trait MetricField: Send + Sync {
    fn dim(&self) -> usize;

    fn components(&self, x: &Vec4) -> Result<MetricComponents>;

    fn coordinate_names(&self) -> Vec<String> {
        (0..self.dim()).map(|i| format!("x{i}")).collect()
    }

    /// Length scale for differencing along `axis` at `x`; the step is a
    /// fixed fraction of it.
    fn step_scale(&self, x: &Vec4, axis: usize) -> f64 {
        x[axis].abs().clamp(1e-3, 1.0)
    }
}

/// Which conformal factor a [`JmMetric`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ConformalSource {
    ThreeBody,
    /// `Phi` replaced by a constant; on S2 this is a round sphere.
    Constant(f64),
}

/// The JM metric of the planar three-body problem on one of the four spaces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JmMetric {
    pub space: Space,
    pub potential: PotentialKind,
    pub energy: f64,
    pub masses: MassConfig,
    pub source: ConformalSource,
}

impl JmMetric {
    pub fn new(space: Space, potential: PotentialKind, energy: f64, masses: MassConfig) -> Result<Self> {
        if !space.has_radius() {
            if potential == PotentialKind::Newtonian {
                return Err(Error::InvalidQuotient("scaling is not an isometry for the Newtonian potential"));
            }
            if energy != 0.0 {
                return Err(Error::InvalidQuotient("scale quotients S3 and S2 require E = 0"));
            }
        }
        Ok(Self { space, potential, energy, masses, source: ConformalSource::ThreeBody })
    }

    /// Zero-energy, equal-mass, `G = m = 1` metric.
    pub fn standard(space: Space, potential: PotentialKind) -> Result<Self> {
        Self::new(space, potential, 0.0, MassConfig::default())
    }

    /// Kinetic metric of `space` scaled by a constant.
    pub fn with_constant_conformal(space: Space, value: f64) -> Self {
        Self {
            space,
            potential: PotentialKind::InverseSquare,
            energy: 0.0,
            masses: MassConfig::default(),
            source: ConformalSource::Constant(value),
        }
    }

    /// Curvature unit: `G m^3` for the inverse-square potential and `G m^{5/2}`
    /// for the Newtonian one (equal masses).
    pub fn unit(&self) -> f64 {
        match self.potential {
            PotentialKind::InverseSquare => self.masses.gm3(),
            PotentialKind::Newtonian => self.masses.gm52(),
        }
    }

    fn eta_xi2(&self, x: &Vec4) -> (f64, f64) {
        (x[self.space.eta_index()], x[self.space.xi2_index()])
    }

    /// Potential energy `V = -W / r^n` and its gradient in chart coordinates
    /// (C2 and R3 only).
    pub fn potential_energy(&self, x: &Vec4) -> Result<(f64, Vec4)> {
        if !self.space.has_radius() {
            return Err(Error::InvalidQuotient("potential energy needs a radial coordinate"));
        }
        let (phi, dphi) = self.conformal_factor(x)?;
        let mut dv = ZERO_VEC;
        for (d, p) in dv.iter_mut().zip(dphi.iter()) {
            *d = -p;
        }
        Ok((self.energy - phi, dv))
    }

    /// `Phi` and its gradient. Fails outside the Hill region or at a collision.
    pub fn conformal_factor(&self, x: &Vec4) -> Result<(f64, Vec4)> {
        let mut dphi = ZERO_VEC;
        let (eta, xi2) = self.eta_xi2(x);
        let phi = match self.source {
            ConformalSource::Constant(c) => c,
            ConformalSource::ThreeBody => {
                let w = angular_potential(&self.masses, self.potential, eta, xi2)?;
                let (ie, ix) = (self.space.eta_index(), self.space.xi2_index());
                if self.space.has_radius() {
                    let r = x[0];
                    if !(r > 0.0) {
                        return Err(Error::ZeroSize);
                    }
                    let n = self.potential.exponent();
                    let rn = r.powf(-n);
                    dphi[0] = -n * w.value * rn / r;
                    dphi[ie] = w.d_eta * rn;
                    dphi[ix] = w.d_xi2 * rn;
                    self.energy + w.value * rn
                } else {
                    dphi[ie] = w.d_eta;
                    dphi[ix] = w.d_xi2;
                    w.value
                }
            }
        };
        if !(phi > 0.0) {
            return Err(Error::OutsideHill { conformal: phi });
        }
        Ok((phi, dphi))
    }

    /// Components at a chart point of this metric's space.
    pub fn at(&self, p: &ChartPoint) -> Result<MetricComponents> {
        if p.space != self.space {
            return Err(Error::Dimension { expected: self.space.dim(), got: p.space.dim() });
        }
        self.components(&p.coords())
    }
}

impl MetricField for JmMetric {
    fn dim(&self) -> usize {
        self.space.dim()
    }

    fn components(&self, x: &Vec4) -> Result<MetricComponents> {
        let (phi, dphi) = self.conformal_factor(x)?;
        let eta = x[self.space.eta_index()];
        if (2.0 * eta).sin().abs() < CHART_EPS {
            return Err(Error::ChartSingular { eta });
        }
        let k = kinetic_metric(self.space, x);
        Ok(MetricComponents::conformal(phi, &dphi, &k))
    }

    fn coordinate_names(&self) -> Vec<String> {
        self.space.coordinate_names().iter().map(|s| s.to_string()).collect()
    }

    /// Shape angles scale with the distance to the nearest collision or
    /// chart edge; `r` with itself.
    fn step_scale(&self, x: &Vec4, axis: usize) -> f64 {
        if self.space.has_radius() && axis == 0 {
            return x[0].abs().clamp(1e-3, 1.0);
        }
        let p = ChartPoint::from_coords(self.space, x);
        crate::analysis::singular_distance(p.eta, p.xi2).clamp(1e-3, 1.0)
    }
}

/// Flat kinetic metric on C2/R3 (a cone), the unit round metric on S3, or
/// the radius-1/2 round metric on S2, in Hopf coordinates, with derivatives.
pub fn kinetic_metric(space: Space, x: &Vec4) -> MetricComponents {
    let mut k = MetricComponents::zero(space.dim());
    match space {
        Space::C2 => {
            let (r, eta) = (x[0], x[1]);
            let (s, c) = (2.0 * eta).sin_cos();
            let r2 = r * r;
            k.g[0][0] = 1.0;
            for i in 1..4 {
                k.g[i][i] = r2;
                k.dg[0][i][i] = 2.0 * r;
            }
            k.g[2][3] = -r2 * c;
            k.g[3][2] = -r2 * c;
            k.dg[0][2][3] = -2.0 * r * c;
            k.dg[0][3][2] = -2.0 * r * c;
            k.dg[1][2][3] = 2.0 * r2 * s;
            k.dg[1][3][2] = 2.0 * r2 * s;
        }
        Space::R3 => {
            let (r, eta) = (x[0], x[1]);
            let s2 = (2.0 * eta).sin().powi(2);
            k.g[0][0] = 1.0;
            k.g[1][1] = r * r;
            k.g[2][2] = r * r * s2;
            k.dg[0][1][1] = 2.0 * r;
            k.dg[0][2][2] = 2.0 * r * s2;
            k.dg[1][2][2] = 2.0 * r * r * (4.0 * eta).sin();
        }
        Space::S3 => {
            let (s, c) = (2.0 * x[0]).sin_cos();
            k.g = [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, -c, 0.0], [0.0, -c, 1.0, 0.0], [0.0; 4]];
            k.dg[0][1][2] = 2.0 * s;
            k.dg[0][2][1] = 2.0 * s;
        }
        Space::S2 => {
            let eta = x[0];
            k.g[0][0] = 1.0;
            k.g[1][1] = (2.0 * eta).sin().powi(2);
            k.dg[0][1][1] = 2.0 * (4.0 * eta).sin();
        }
    }
    k
}

/// Round kinetic block on S3 (3x3) or S2 (2x2) with a degeneracy flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundKinetic {
    pub dim: usize,
    pub matrix: Mat4,
    /// True at `eta` in `{0, pi/2}` where the block is singular.
    pub degenerate: bool,
}

pub fn kinetic_round_metric(space: Space, eta: f64) -> Result<RoundKinetic> {
    if space.has_radius() {
        return Err(Error::InvalidArgument(format!("no round kinetic block for {space}")));
    }
    let mut x = ZERO_VEC;
    x[0] = eta;
    let k = kinetic_metric(space, &x);
    Ok(RoundKinetic { dim: k.dim, matrix: k.g, degenerate: (2.0 * eta).sin().abs() < CHART_EPS })
}

/// Central-difference derivative of the metric, for cross-checking `dg`.
pub fn finite_difference_dg(mf: &dyn MetricField, x: &Vec4, step: f64) -> Result<[Mat4; 4]> {
    let dim = mf.dim();
    let mut out = [ZERO_MAT; 4];
    for (a, slot) in out.iter_mut().enumerate().take(dim) {
        let (mut xp, mut xm) = (*x, *x);
        xp[a] += step;
        xm[a] -= step;
        let (gp, gm) = (mf.components(&xp)?.g, mf.components(&xm)?.g);
        for i in 0..dim {
            for j in 0..dim {
                slot[i][j] = (gp[i][j] - gm[i][j]) / (2.0 * step);
            }
        }
    }
    Ok(out)
}
