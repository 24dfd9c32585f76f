//! Jacobi fields by the geodesic deviation equation in a parallel-transported
//! frame, and the two-geodesic finite-difference oracle.

use serde::Serialize;

use crate::curvature::{christoffel, riemann};
use crate::dynamics::{geodesic_rhs, integrate, FlowState, StopStatus, Tolerances};
use crate::error::{Error, Result};
use crate::linalg::{solve, Mat4, Vec4, ZERO_MAT, ZERO_VEC};
use crate::metrics::MetricField;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JacobiSample {
    pub lambda: f64,
    pub x: Vec<f64>,
    /// Field in coordinate components.
    pub y: Vec<f64>,
    /// Field in the transported frame (initially the coordinate frame).
    pub frame_components: Vec<f64>,
}

// State layout: x (n), v (n), frame E_a^l (n*n, column a), c (n), c' (n).
struct Layout {
    n: usize,
}

impl Layout {
    fn x(&self) -> usize {
        0
    }
    fn v(&self) -> usize {
        self.n
    }
    fn frame(&self) -> usize {
        2 * self.n
    }
    fn c(&self) -> usize {
        2 * self.n + self.n * self.n
    }
    fn cd(&self) -> usize {
        3 * self.n + self.n * self.n
    }
    fn len(&self) -> usize {
        4 * self.n + self.n * self.n
    }
    fn vec(&self, y: &[f64], at: usize) -> Vec4 {
        let mut out = ZERO_VEC;
        out[..self.n].copy_from_slice(&y[at..at + self.n]);
        out
    }
    fn frame_mat(&self, y: &[f64]) -> Mat4 {
        let mut e = ZERO_MAT;
        for a in 0..self.n {
            for l in 0..self.n {
                e[l][a] = y[self.frame() + a * self.n + l];
            }
        }
        e
    }
}

/// Solves `D^2 y / d lambda^2 = -R(y, v) v` along the geodesic from `start`.
/// `y0` and `dy0` are the field and its covariant derivative at `lambda = 0`.
pub fn jacobi_field_evolve(
    mf: &dyn MetricField,
    start: &FlowState,
    y0: &Vec4,
    dy0: &Vec4,
    lambdas: &[f64],
    tol: &Tolerances,
) -> Result<Vec<JacobiSample>> {
    let n = mf.dim();
    let lay = Layout { n };
    let x0 = start.point.coords();
    let mut s0 = vec![0.0; lay.len()];
    s0[..n].copy_from_slice(&x0[..n]);
    s0[n..2 * n].copy_from_slice(&start.velocity[..n]);
    for a in 0..n {
        s0[lay.frame() + a * n + a] = 1.0;
    }
    s0[lay.c()..lay.c() + n].copy_from_slice(&y0[..n]);
    s0[lay.cd()..lay.cd() + n].copy_from_slice(&dy0[..n]);

    let rhs = |_: f64, y: &[f64], d: &mut [f64]| -> Result<()> {
        let (x, v) = (lay.vec(y, lay.x()), lay.vec(y, lay.v()));
        let curv = riemann(mf, &x)?;
        let gam = &curv.connection.gamma;
        let acc = geodesic_rhs(mf, &x, &v)?;
        d[..n].copy_from_slice(&v[..n]);
        d[n..2 * n].copy_from_slice(&acc[..n]);
        let e = lay.frame_mat(y);
        for a in 0..n {
            for l in 0..n {
                let mut s = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        s += gam[l][i][j] * v[i] * e[j][a];
                    }
                }
                d[lay.frame() + a * n + l] = -s;
            }
        }
        // Coordinate field y = E c, then R(y, v) v expressed back in the frame.
        let c = lay.vec(y, lay.c());
        let yc: Vec4 = std::array::from_fn(|l| if l < n { (0..n).map(|a| e[l][a] * c[a]).sum() } else { 0.0 });
        let mut ryv = ZERO_VEC;
        for (l, slot) in ryv.iter_mut().enumerate().take(n) {
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        *slot += curv.riemann[l][k][i][j] * v[k] * yc[i] * v[j];
                    }
                }
            }
        }
        let rc = solve(n, &e, &ryv)?;
        for a in 0..n {
            d[lay.c() + a] = y[lay.cd() + a];
            d[lay.cd() + a] = -rc[a];
        }
        Ok(())
    };
    let sol = integrate(rhs, 0.0, &s0, lambdas, &[], tol)?;
    if sol.status != StopStatus::Completed {
        return Err(Error::Integration(format!("Jacobi field run stopped: {}", sol.status)));
    }
    Ok(sol
        .t
        .iter()
        .zip(&sol.y)
        .map(|(&lambda, s)| {
            let e = lay.frame_mat(s);
            let c = lay.vec(s, lay.c());
            JacobiSample {
                lambda,
                x: s[..n].to_vec(),
                y: (0..n).map(|l| (0..n).map(|a| e[l][a] * c[a]).sum()).collect(),
                frame_components: c[..n].to_vec(),
            }
        })
        .collect())
}

/// `(x_B - x_A) / delta` where geodesic A starts at `(x0, v0)` and B at
/// `(x0 + delta y0, v0 + delta w0)`. The Jacobi field with `y(0) = y0` and
/// coordinate derivative `w0` has covariant derivative `w0 + Gamma(v0, y0)`.
pub fn two_geodesic_separation(
    mf: &dyn MetricField,
    start: &FlowState,
    y0: &Vec4,
    w0: &Vec4,
    delta: f64,
    lambdas: &[f64],
    tol: &Tolerances,
) -> Result<(Vec<Vec<f64>>, Vec4)> {
    let n = mf.dim();
    let run = |x: Vec4, v: Vec4| -> Result<Vec<Vec<f64>>> {
        let mut s = x[..n].to_vec();
        s.extend_from_slice(&v[..n]);
        let rhs = |_: f64, y: &[f64], d: &mut [f64]| -> Result<()> {
            let (mut xx, mut vv) = (ZERO_VEC, ZERO_VEC);
            xx[..n].copy_from_slice(&y[..n]);
            vv[..n].copy_from_slice(&y[n..]);
            let a = geodesic_rhs(mf, &xx, &vv)?;
            d[..n].copy_from_slice(&vv[..n]);
            d[n..].copy_from_slice(&a[..n]);
            Ok(())
        };
        let sol = integrate(rhs, 0.0, &s, lambdas, &[], tol)?;
        if sol.status != StopStatus::Completed {
            return Err(Error::Integration(format!("geodesic stopped: {}", sol.status)));
        }
        Ok(sol.y.iter().map(|y| y[..n].to_vec()).collect())
    };
    let x0 = start.point.coords();
    let v0 = start.velocity;
    let a = run(x0, v0)?;
    let b = run(std::array::from_fn(|i| x0[i] + delta * y0[i]), std::array::from_fn(|i| v0[i] + delta * w0[i]))?;
    let sep = a.iter().zip(&b).map(|(p, q)| p.iter().zip(q).map(|(u, w)| (w - u) / delta).collect()).collect();

    let gam = christoffel(mf, &x0)?.gamma;
    let cov: Vec4 = std::array::from_fn(|l| {
        if l >= n {
            return 0.0;
        }
        w0[l] + (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| gam[l][i][j] * v0[i] * y0[j]).sum::<f64>()
    });
    Ok((sep, cov))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coords::{ChartPoint, MassConfig, Space};
    use crate::dynamics::{lagrange_rotation, uniform_clocks};
    use crate::linalg::inner;
    use crate::metrics::{JmMetric, PotentialKind};

    fn tol() -> Tolerances {
        Tolerances { rtol: 1e-11, atol: 1e-13, ..Default::default() }
    }

    fn rel_err(a: &[f64], b: &[f64]) -> f64 {
        let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
        let s: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
        d / s
    }

    fn check_oracle(mf: &dyn MetricField, start: FlowState, y0: Vec4, w0: Vec4) {
        let ls = uniform_clocks(0.9, 3);
        let (sep, cov) = two_geodesic_separation(mf, &start, &y0, &w0, 1e-6, &ls, &tol()).unwrap();
        let jf = jacobi_field_evolve(mf, &start, &y0, &cov, &ls, &tol()).unwrap();
        for (s, j) in sep.iter().zip(&jf) {
            assert!(rel_err(&j.y, s) < 1e-3, "{:?} vs {:?}", j.y, s);
        }
    }

    #[test]
    fn flat_field_grows_linearly() {
        let m = JmMetric::with_constant_conformal(Space::C2, 1.0);
        let start = FlowState::geodesic(ChartPoint::c2(1.0, 0.6, 0.2, 0.4), [0.3, -0.1, 0.2, 0.1]);
        let (c0, dc0) = ([0.1, 0.0, 0.2, 0.0], [0.0, 0.3, 0.0, -0.1]);
        let jf = jacobi_field_evolve(&m, &start, &c0, &dc0, &uniform_clocks(1.0, 4), &tol()).unwrap();
        for s in &jf {
            for a in 0..4 {
                assert!((s.frame_components[a] - (c0[a] + s.lambda * dc0[a])).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn round_sphere_field_oscillates() {
        // Radius 1/2: |y| = (1/2) sin(2 lambda) along the unit-speed equator.
        let m = JmMetric::with_constant_conformal(Space::S2, 1.0);
        let p = ChartPoint::s2(std::f64::consts::FRAC_PI_4, 0.3);
        let start = FlowState::geodesic(p, [0.0, 1.0, 0.0, 0.0]);
        let dy0 = [1.0, 0.0, 0.0, 0.0];
        let jf = jacobi_field_evolve(&m, &start, &ZERO_VEC, &dy0, &uniform_clocks(1.2, 6), &tol()).unwrap();
        for s in &jf {
            let x: Vec4 = [s.x[0], s.x[1], 0.0, 0.0];
            let g = m.components(&x).unwrap().g;
            let y: Vec4 = [s.y[0], s.y[1], 0.0, 0.0];
            let norm = inner(2, &g, &y, &y).sqrt();
            assert!((norm - 0.5 * (2.0 * s.lambda).sin()).abs() < 1e-6, "{} at {}", norm, s.lambda);
        }
    }

    #[test]
    fn matches_two_geodesic_oracle() {
        let m = JmMetric::new(Space::C2, PotentialKind::InverseSquare, 0.5, MassConfig::default()).unwrap();
        let start = FlowState::geodesic(ChartPoint::c2(1.2, 0.7, 0.3, 0.9), [0.2, 0.1, -0.15, 0.05]);
        check_oracle(&m, start, [0.3, 0.2, -0.1, 0.4], [0.1, 0.0, 0.2, -0.1]);

        let (rot, _, e) = lagrange_rotation(&MassConfig::default(), PotentialKind::Newtonian, 1.0).unwrap();
        let m = JmMetric::new(Space::C2, PotentialKind::Newtonian, e, MassConfig::default()).unwrap();
        let start = FlowState::geodesic(rot.point, rot.velocity);
        check_oracle(&m, start, [0.0, 1.0, 0.0, 0.0], ZERO_VEC);
    }

    #[test]
    fn rotation_eta_perturbation_grows() {
        // kappa = -omega^2/2 along eta: y'' = +omega^2 y / 2 initially.
        let (rot, omega, e) = lagrange_rotation(&MassConfig::default(), PotentialKind::Newtonian, 1.0).unwrap();
        let m = JmMetric::new(Space::C2, PotentialKind::Newtonian, e, MassConfig::default()).unwrap();
        let start = FlowState::geodesic(rot.point, rot.velocity);
        let h = 1e-2;
        let jf = jacobi_field_evolve(&m, &start, &[0.0, 1.0, 0.0, 0.0], &ZERO_VEC, &[h], &tol()).unwrap();
        let accel = 2.0 * (jf[0].frame_components[1] - 1.0) / (h * h);
        assert!((accel - 0.5 * omega * omega).abs() < 1e-3, "{accel}");
    }
}
