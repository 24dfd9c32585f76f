//! Stability tensor `S^i_k = R^i_{jkl} v^j v^l` along a geodesic direction,
//! its spectrum, closed forms for the Lagrange solutions, and Jacobi fields.

mod jacobi;

use serde::Serialize;

use crate::curvature::{riemann, Curvature};
use crate::error::{Error, Result};
use crate::linalg::{generalized_symmetric_eigen, inner, mat_mul, mat_vec, max_abs_asymmetry, Mat4, Vec4, ZERO_MAT};
use crate::metrics::{MetricField, PlanarJm, PlanarPotential, PotentialKind};

pub use jacobi::{jacobi_field_evolve, two_geodesic_separation, JacobiSample};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Stable,
    Unstable,
    Neutral,
}

impl Verdict {
    /// Sign of `kappa` with a relative dead zone `tol * scale`.
    pub fn from_kappa(kappa: f64, scale: f64, tol: f64) -> Self {
        if kappa > tol * scale {
            Verdict::Stable
        } else if kappa < -tol * scale {
            Verdict::Unstable
        } else {
            Verdict::Neutral
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Stable => "stable",
            Verdict::Unstable => "unstable",
            Verdict::Neutral => "neutral",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub coordinates: Vec<String>,
    pub point: Vec<f64>,
    pub velocity: Vec<f64>,
    /// Mixed tensor, `tensor[i][k] = S^i_k`.
    pub tensor: Vec<Vec<f64>>,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// g-orthonormal, `eigenvectors[m]` pairs with `eigenvalues[m]`.
    pub eigenvectors: Vec<Vec<f64>>,
    pub verdicts: Vec<Verdict>,
    /// `max |g S - (g S)^T|`.
    pub symmetry_residual: f64,
    /// `|S v|` in the metric.
    pub zero_mode_residual: f64,
    /// `max_m |kappa_m - Ar(f_m, v)^2 K(f_m, v)|`.
    pub kappa_residual: f64,
    #[serde(skip)]
    pub curvature: Curvature,
}

impl StabilityReport {
    pub fn dim(&self) -> usize {
        self.velocity.len()
    }

    /// `S` as a fixed-size matrix.
    pub fn matrix(&self) -> Mat4 {
        let mut s = ZERO_MAT;
        for (i, row) in self.tensor.iter().enumerate() {
            s[i][..row.len()].copy_from_slice(row);
        }
        s
    }

    /// `g(S e_a, e_a) / g(e_a, e_a)` for coordinate direction `a`.
    pub fn coordinate_kappa(&self, a: usize) -> f64 {
        let g = self.curvature.metric();
        let s = self.matrix();
        let d = self.dim();
        let e = crate::curvature::unit(a);
        inner(d, g, &mat_vec(d, &s, &e), &e) / g[a][a]
    }
}

/// Builds the stability tensor along `velocity` at `x`.
pub fn stability_tensor(mf: &dyn MetricField, x: &Vec4, velocity: &Vec4) -> Result<StabilityReport> {
    let curv = riemann(mf, x)?;
    let d = curv.dim();
    let g = *curv.metric();
    let vv = inner(d, &g, velocity, velocity);
    if !(vv > 0.0) {
        return Err(Error::InvalidArgument("stability tensor needs a nonzero velocity".into()));
    }
    // (R(y, v) v)^l = R^l_{k i j} v^k y^i v^j
    let mut s = ZERO_MAT;
    for l in 0..d {
        for i in 0..d {
            let mut acc = 0.0;
            for k in 0..d {
                for j in 0..d {
                    acc += curv.riemann[l][k][i][j] * velocity[k] * velocity[j];
                }
            }
            s[l][i] = acc;
        }
    }
    let gs = mat_mul(d, &g, &s);
    let scale = (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).fold(0.0f64, |m, (i, j)| m.max(gs[i][j].abs()));
    let symmetry_residual = max_abs_asymmetry(d, &gs);
    let mut sym = ZERO_MAT;
    for i in 0..d {
        for j in 0..d {
            sym[i][j] = 0.5 * (gs[i][j] + gs[j][i]);
        }
    }
    let (vals, vecs) = generalized_symmetric_eigen(d, &sym, &g)?;
    let sv = mat_vec(d, &s, velocity);
    let zero_mode_residual = inner(d, &g, &sv, &sv).max(0.0).sqrt();

    let mut eigenvectors = Vec::with_capacity(d);
    let mut kappa_residual = 0.0f64;
    let mut verdicts = Vec::with_capacity(d);
    for m in 0..d {
        let f: Vec4 = std::array::from_fn(|i| if i < d { vecs[i][m] } else { 0.0 });
        kappa_residual = kappa_residual.max((vals[m] - curv.biquadratic(&f, velocity)).abs());
        verdicts.push(Verdict::from_kappa(vals[m], scale, 1e-9));
        eigenvectors.push(f[..d].to_vec());
    }
    Ok(StabilityReport {
        coordinates: mf.coordinate_names(),
        point: x[..d].to_vec(),
        velocity: velocity[..d].to_vec(),
        tensor: (0..d).map(|i| s[i][..d].to_vec()).collect(),
        eigenvalues: vals[..d].to_vec(),
        eigenvectors,
        verdicts,
        symmetry_residual,
        zero_mode_residual,
        kappa_residual,
        curvature: curv,
    })
}

/// Verdict per named direction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionVerdict {
    pub direction: String,
    pub kappa: f64,
    pub verdict: Verdict,
}

/// Classifies the coordinate directions `axes` by `g(S e, e) / g(e, e)`.
pub fn stability_verdicts(report: &StabilityReport, axes: &[usize]) -> Vec<DirectionVerdict> {
    let kappas: Vec<f64> = axes.iter().map(|&a| report.coordinate_kappa(a)).collect();
    let scale = kappas.iter().fold(0.0f64, |m, k| m.max(k.abs()));
    axes.iter()
        .zip(kappas)
        .map(|(&a, kappa)| DirectionVerdict {
            direction: report.coordinates[a].clone(),
            kappa,
            verdict: Verdict::from_kappa(kappa, scale, 1e-6),
        })
        .collect()
}

/// Closed-form diagonal of `S` in `(r, eta, xi1, xi2)` for the equal-mass
/// Lagrange homothety at size `r`, radial speed `rdot`, energy `energy`;
/// `unit` is `G m^3` (inverse-square) or `G m^{5/2}` (Newtonian).
pub fn homothety_tensor(potential: PotentialKind, unit: f64, energy: f64, r: f64, rdot: f64) -> Vec4 {
    let e = energy;
    match potential {
        PotentialKind::InverseSquare => {
            let c = 6.0 * unit * rdot * rdot / (3.0 * unit * r + e * r.powi(3)).powi(2);
            let a = -3.0 * unit - 2.0 * e * r * r;
            [0.0, c * a, -c * e * r * r, c * a]
        }
        PotentialKind::Newtonian => {
            let c = 3.0 * unit * rdot * rdot / (4.0 * r * r * (3.0 * unit + e * r).powi(2));
            let a = -9.0 * unit - 5.0 * e * r;
            [0.0, c * a, -2.0 * c * e * r, c * a]
        }
    }
}

/// Closed-form diagonal of `S` for the Newtonian equal-mass Lagrange
/// rotation with trajectory velocity `omega d_xi1`.
pub fn rotation_tensor(omega: f64) -> Vec4 {
    let w2 = omega * omega;
    [w2, -0.5 * w2, 0.0, -0.5 * w2]
}

/// Verdicts for `(eta, xi1, xi2)` on the inverse-square homothety from the
/// closed form: all unstable for `E > 0`, all stable for
/// `-3 G m^3 / r^2 < E < -3 G m^3 / (2 r^2)`, and otherwise `xi1` stable
/// with `eta`, `xi2` unstable.
pub fn homothety_window_verdicts(unit: f64, energy: f64, r: f64) -> [Verdict; 3] {
    let d = homothety_tensor(PotentialKind::InverseSquare, unit, energy, r, 1.0);
    let scale = d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    [
        Verdict::from_kappa(d[1], scale, 1e-12),
        Verdict::from_kappa(d[2], scale, 1e-12),
        Verdict::from_kappa(d[3], scale, 1e-12),
    ]
}

/// The isotropic oscillator, where JM-geodesic and trajectory stability can
/// disagree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillatorComparison {
    pub k: f64,
    pub energy: f64,
    /// JM scalar curvature from the engine.
    pub scalar: f64,
    /// `2 E k / T^3`.
    pub scalar_formula: f64,
    pub geodesic: Verdict,
    /// From `x'' = -(k/m) x`.
    pub trajectory: Verdict,
}

impl OscillatorComparison {
    pub fn agrees(&self) -> bool {
        self.geodesic == self.trajectory
    }
}

/// Compares geodesic and trajectory stability for the unit-mass oscillator
/// at radius `r` (which must lie in the Hill region).
pub fn oscillator_caveat(k: f64, energy: f64, r: f64) -> Result<OscillatorComparison> {
    let m = PlanarJm::new(1.0, energy, PlanarPotential::Oscillator { k });
    let kinetic = energy - 0.5 * k * r * r;
    if !(kinetic > 0.0) {
        return Err(Error::OutsideHill { conformal: kinetic });
    }
    let scalar = crate::curvature::scalar(&m, &[r, 0.0, 0.0, 0.0])?;
    let scalar_formula = 2.0 * energy * k / kinetic.powi(3);
    let sign = |v: f64| Verdict::from_kappa(v, v.abs().max(1.0), 1e-12);
    Ok(OscillatorComparison { k, energy, scalar, scalar_formula, geodesic: sign(scalar), trajectory: sign(k) })
}
