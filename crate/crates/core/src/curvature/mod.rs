//! Levi-Civita connection and curvature of any [`MetricField`].
//!
//! Conventions: `Gamma^l_ij = g^{lk}(d_i g_kj + d_j g_ki - d_k g_ij)/2`,
//! `R(e_i, e_j) e_k = R^l_kij e_l` with
//! `R^l_kij = d_i Gamma^l_jk - d_j Gamma^l_ik + Gamma^l_im Gamma^m_jk - Gamma^l_jm Gamma^m_ik`,
//! Ricci `R_kj = R^i_kij`, and sectional curvature
//! `K(u, v) = g(R(u, v) v, u) / (g(u,u) g(v,v) - g(u,v)^2)`.
//! In two dimensions the scalar curvature is twice the Gaussian curvature.

pub mod closed_form;
pub mod limits;
pub mod oneill;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{inner, spd_inverse, Mat4, Vec4, ZERO_MAT};
use crate::metrics::{MetricComponents, MetricField};

pub use closed_form::{
    grad_laplace_round, relations_from_jet, scalar_closed_form, scalar_from_jet, scalar_relations_residual,
    shape_sphere_factors, RelationResidual, ShapeSphereFactors,
};
pub use limits::{expected_value, neville_extrapolate, special_limits, Approach, LimitEntry, LimitQuantity};
pub use oneill::{oneill_residual, OneillPlane, OneillResidual};

pub type Tensor3 = [Mat4; 4];
pub type Tensor4 = [Tensor3; 4];

/// Relative step for differencing the Christoffel symbols.
pub const DEFAULT_STEP: f64 = 1e-3;

/// Christoffel symbols `gamma[l][i][j] = Gamma^l_ij` and the inverse metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Connection {
    pub dim: usize,
    pub metric: MetricComponents,
    pub inverse: Mat4,
    pub gamma: Tensor3,
}

pub fn christoffel(mf: &dyn MetricField, x: &Vec4) -> Result<Connection> {
    let metric = mf.components(x)?;
    connection_from(metric)
}

pub fn connection_from(metric: MetricComponents) -> Result<Connection> {
    let dim = metric.dim;
    let inverse = spd_inverse(dim, &metric.g)?;
    let dg = &metric.dg;
    let mut lowered = [ZERO_MAT; 4]; // [k][i][j] = Gamma_kij
    for (k, slot) in lowered.iter_mut().enumerate().take(dim) {
        for i in 0..dim {
            for j in i..dim {
                let v = 0.5 * (dg[i][k][j] + dg[j][k][i] - dg[k][i][j]);
                slot[i][j] = v;
                slot[j][i] = v;
            }
        }
    }
    let mut gamma = [ZERO_MAT; 4];
    for (l, slot) in gamma.iter_mut().enumerate().take(dim) {
        for i in 0..dim {
            for j in i..dim {
                let v: f64 = (0..dim).map(|k| inverse[l][k] * lowered[k][i][j]).sum();
                slot[i][j] = v;
                slot[j][i] = v;
            }
        }
    }
    Ok(Connection { dim, metric, inverse, gamma })
}

/// `d_a Gamma^l_ij` by a five-point central stencil.
pub fn christoffel_derivative(mf: &dyn MetricField, x: &Vec4, step: f64) -> Result<[Tensor3; 4]> {
    let dim = mf.dim();
    let mut out = [[ZERO_MAT; 4]; 4];
    for (a, slot) in out.iter_mut().enumerate().take(dim) {
        let h = step * mf.step_scale(x, a);
        let at = |s: f64| -> Result<Tensor3> {
            let mut y = *x;
            y[a] += s * h;
            Ok(christoffel(mf, &y)?.gamma)
        };
        let (p2, p1, m1, m2) = (at(2.0)?, at(1.0)?, at(-1.0)?, at(-2.0)?);
        for l in 0..dim {
            for i in 0..dim {
                for j in 0..dim {
                    slot[l][i][j] = (-p2[l][i][j] + 8.0 * p1[l][i][j] - 8.0 * m1[l][i][j] + m2[l][i][j]) / (12.0 * h);
                }
            }
        }
    }
    Ok(out)
}

/// Full curvature data at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Curvature {
    pub x: Vec4,
    pub connection: Connection,
    /// `riemann[l][k][i][j] = R^l_kij`.
    pub riemann: Tensor4,
    /// `lowered[m][k][i][j] = R_mkij = g_ml R^l_kij`.
    pub lowered: Tensor4,
    pub ricci: Mat4,
    pub scalar: f64,
}

pub fn riemann(mf: &dyn MetricField, x: &Vec4) -> Result<Curvature> {
    riemann_with_step(mf, x, DEFAULT_STEP)
}

pub fn riemann_with_step(mf: &dyn MetricField, x: &Vec4, step: f64) -> Result<Curvature> {
    let conn = christoffel(mf, x)?;
    let dgam = christoffel_derivative(mf, x, step)?;
    let dim = conn.dim;
    let gam = &conn.gamma;
    let mut rm = [[ZERO_MAT; 4]; 4];
    for l in 0..dim {
        for k in 0..dim {
            for i in 0..dim {
                for j in (i + 1)..dim {
                    let mut v = dgam[i][l][j][k] - dgam[j][l][i][k];
                    for m in 0..dim {
                        v += gam[l][i][m] * gam[m][j][k] - gam[l][j][m] * gam[m][i][k];
                    }
                    rm[l][k][i][j] = v;
                    rm[l][k][j][i] = -v;
                }
            }
        }
    }
    let g = &conn.metric.g;
    let mut low = [[ZERO_MAT; 4]; 4];
    for m in 0..dim {
        for k in 0..dim {
            for i in 0..dim {
                for j in 0..dim {
                    low[m][k][i][j] = (0..dim).map(|l| g[m][l] * rm[l][k][i][j]).sum();
                }
            }
        }
    }
    let mut ricci = ZERO_MAT;
    for k in 0..dim {
        for j in 0..dim {
            ricci[k][j] = (0..dim).map(|i| rm[i][k][i][j]).sum();
        }
    }
    let mut scalar = 0.0;
    for k in 0..dim {
        for j in 0..dim {
            scalar += conn.inverse[k][j] * ricci[k][j];
        }
    }
    Ok(Curvature { x: *x, connection: conn, riemann: rm, lowered: low, ricci, scalar })
}

impl Curvature {
    pub fn dim(&self) -> usize {
        self.connection.dim
    }

    pub fn metric(&self) -> &Mat4 {
        &self.connection.metric.g
    }

    /// `g(R(u, v) v, u)`.
    pub fn biquadratic(&self, u: &Vec4, v: &Vec4) -> f64 {
        let dim = self.dim();
        let mut s = 0.0;
        for m in 0..dim {
            for k in 0..dim {
                for i in 0..dim {
                    for j in 0..dim {
                        s += self.lowered[m][k][i][j] * u[m] * v[k] * u[i] * v[j];
                    }
                }
            }
        }
        s
    }

    /// Squared area `g(u,u) g(v,v) - g(u,v)^2` of the parallelogram on `u, v`.
    pub fn area_sq(&self, u: &Vec4, v: &Vec4) -> f64 {
        let (g, d) = (self.metric(), self.dim());
        inner(d, g, u, u) * inner(d, g, v, v) - inner(d, g, u, v).powi(2)
    }

    pub fn sectional(&self, u: &Vec4, v: &Vec4) -> Result<f64> {
        let (g, d) = (self.metric(), self.dim());
        let a2 = self.area_sq(u, v);
        if !(a2 > 1e-12 * inner(d, g, u, u) * inner(d, g, v, v)) {
            return Err(Error::DegeneratePlane { area_sq: a2 });
        }
        Ok(self.biquadratic(u, v) / a2)
    }

    /// Sectional curvature of the coordinate plane `(e_a, e_b)`.
    pub fn coordinate_sectional(&self, a: usize, b: usize) -> Result<f64> {
        self.sectional(&unit(a), &unit(b))
    }

    /// Largest `|R^l_kij + R^l_ijk + R^l_jki|`.
    pub fn bianchi_residual(&self) -> f64 {
        let d = self.dim();
        let r = &self.riemann;
        let mut worst: f64 = 0.0;
        for l in 0..d {
            for k in 0..d {
                for i in 0..d {
                    for j in 0..d {
                        worst = worst.max((r[l][k][i][j] + r[l][i][j][k] + r[l][j][k][i]).abs());
                    }
                }
            }
        }
        worst
    }

    /// `sum_{a != b} K(e_a, e_b)` over a g-orthonormal frame.
    pub fn sectional_sum(&self) -> Result<f64> {
        let frame = orthonormal_frame(self.dim(), self.metric())?;
        let mut s = 0.0;
        for a in 0..self.dim() {
            for b in 0..self.dim() {
                if a != b {
                    s += self.biquadratic(&frame[a], &frame[b]);
                }
            }
        }
        Ok(s)
    }
}

pub fn unit(a: usize) -> Vec4 {
    let mut e = [0.0; 4];
    e[a] = 1.0;
    e
}

/// Gram-Schmidt on the coordinate basis.
pub fn orthonormal_frame(dim: usize, g: &Mat4) -> Result<[Vec4; 4]> {
    let mut frame = [[0.0; 4]; 4];
    for a in 0..dim {
        let mut v = unit(a);
        for b in 0..a {
            let proj = inner(dim, g, &v, &frame[b]);
            for i in 0..dim {
                v[i] -= proj * frame[b][i];
            }
        }
        let n = inner(dim, g, &v, &v);
        if !(n > 0.0) {
            return Err(Error::DegenerateMetric);
        }
        for vi in v.iter_mut().take(dim) {
            *vi /= n.sqrt();
        }
        frame[a] = v;
    }
    Ok(frame)
}

pub fn sectional(mf: &dyn MetricField, x: &Vec4, u: &Vec4, v: &Vec4) -> Result<f64> {
    riemann(mf, x)?.sectional(u, v)
}

pub fn scalar(mf: &dyn MetricField, x: &Vec4) -> Result<f64> {
    Ok(riemann(mf, x)?.scalar)
}

/// Named-plane summary of [`Curvature`] suitable for serialisation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub coordinates: Vec<String>,
    pub point: Vec<f64>,
    pub scalar: f64,
    /// `(plane, K)` for every coordinate plane, named `"a-b"`.
    pub sectional: Vec<(String, f64)>,
    pub christoffel: Vec<Vec<Vec<f64>>>,
    pub bianchi_residual: f64,
    #[serde(skip)]
    pub curvature: Curvature,
}

impl CurvatureReport {
    pub fn new(mf: &dyn MetricField, x: &Vec4) -> Result<Self> {
        let curvature = riemann(mf, x)?;
        let names = mf.coordinate_names();
        let d = mf.dim();
        let mut sectional = Vec::new();
        for a in 0..d {
            for b in (a + 1)..d {
                sectional.push((format!("{}-{}", names[a], names[b]), curvature.coordinate_sectional(a, b)?));
            }
        }
        let gam = &curvature.connection.gamma;
        let christoffel = (0..d).map(|l| (0..d).map(|i| (0..d).map(|j| gam[l][i][j]).collect()).collect()).collect();
        Ok(Self {
            coordinates: names,
            point: x[..d].to_vec(),
            scalar: curvature.scalar,
            sectional,
            christoffel,
            bianchi_residual: curvature.bianchi_residual(),
            curvature,
        })
    }

    pub fn plane(&self, name: &str) -> Option<f64> {
        self.sectional.iter().find(|(n, _)| n == name).map(|(_, k)| *k)
    }

    pub fn biquadratic(&self, u: &Vec4, v: &Vec4) -> f64 {
        self.curvature.biquadratic(u, v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coords::{special_point, ChartPoint, Space, SpecialPoint};
    use crate::metrics::{JmMetric, PlanarJm, PlanarPotential, PotentialKind, RoundSphere};

    #[test]
    fn flat_cartesian_has_no_connection() {
        let m = PlanarJm::new(1.0, 1.0, PlanarPotential::Free);
        let c = riemann(&m, &[0.3, -0.2, 0.0, 0.0]).unwrap();
        assert!(c.connection.gamma.iter().flatten().flatten().all(|v| *v == 0.0));
        assert!(c.scalar.abs() < 1e-12);
    }

    #[test]
    fn flat_polar_has_polar_symbols_only() {
        let m = PlanarJm::new(1.0, 1.0, PlanarPotential::Free).polar();
        let c = riemann(&m, &[2.0, 0.3, 0.0, 0.0]).unwrap();
        let g = &c.connection.gamma;
        assert!((g[0][1][1] + 2.0).abs() < 1e-14);
        assert!((g[1][0][1] - 0.5).abs() < 1e-14);
        assert!(c.scalar.abs() < 1e-9);
    }

    #[test]
    fn kepler_and_oscillator() {
        let kz = PlanarJm::new(1.0, 0.0, PlanarPotential::Kepler { k: 1.0 });
        for x in [[1.0, 0.0], [0.3, 0.7], [-2.0, 1.0]] {
            assert!(scalar(&kz, &[x[0], x[1], 0.0, 0.0]).unwrap().abs() < 1e-8);
        }
        let k1 = PlanarJm::new(1.0, 1.0, PlanarPotential::Kepler { k: 1.0 });
        let r = scalar(&k1, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!((r + 0.125).abs() < 1e-8, "{r}");
        let osc = PlanarJm::new(1.0, 2.0, PlanarPotential::Oscillator { k: 1.0 });
        for x in [[0.5f64, 0.0], [0.3, 0.9], [-1.0, 0.5]] {
            let r = x[0].hypot(x[1]);
            let got = scalar(&osc, &[x[0], x[1], 0.0, 0.0]).unwrap();
            assert!((got - osc.scalar_curvature(r)).abs() < 1e-6);
        }
    }

    #[test]
    fn round_sphere_constant_curvature() {
        let s = RoundSphere { radius: 2.0 };
        let c = riemann(&s, &[0.9, 0.4, 0.0, 0.0]).unwrap();
        assert!((c.scalar - 0.5).abs() < 1e-8);
        assert!((c.coordinate_sectional(0, 1).unwrap() - 0.25).abs() < 1e-8);
    }

    #[test]
    fn gamma_r_rr_at_lagrange() {
        let m = JmMetric::standard(Space::C2, PotentialKind::InverseSquare).unwrap();
        let l4 = special_point(SpecialPoint::L4);
        let conn = christoffel(&m, &l4.coords()).unwrap();
        assert!((conn.gamma[0][0][0] + 1.0).abs() < 1e-12);
        for i in 1..4 {
            assert!(conn.gamma[i][0][0].abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_plane() {
        let m = JmMetric::standard(Space::S2, PotentialKind::InverseSquare).unwrap();
        let c = riemann(&m, &ChartPoint::s2(0.5, 0.3).coords()).unwrap();
        let u = [1.0, 2.0, 0.0, 0.0];
        assert!(matches!(c.sectional(&u, &[2.0, 4.0, 0.0, 0.0]), Err(Error::DegeneratePlane { .. })));
    }
}
