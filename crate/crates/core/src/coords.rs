//! Planar positions, Jacobi vectors, Hopf coordinates and the shape sphere.
//!
//! The chain of maps is
//! `x_i  ->  (J1, J2, J3)  ->  z_i = sqrt(M_i) J_i  ->  (r, eta, xi1, xi2)`,
//! with `z1 = r e^{i(xi1 + xi2)} sin(eta)` and `z2 = r e^{i(xi1 - xi2)} cos(eta)`.
//! `(2 eta, 2 xi2)` are polar and azimuthal angles on the shape sphere.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI, TAU};
use std::fmt;

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Vec4, ZERO_VEC};

pub type C64 = Complex<f64>;

/// Masses, coupling constant and the derived reduced masses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassConfig {
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    pub g: f64,
}

impl Default for MassConfig {
    fn default() -> Self {
        Self { m1: 1.0, m2: 1.0, m3: 1.0, g: 1.0 }
    }
}

impl MassConfig {
    pub fn new(m1: f64, m2: f64, m3: f64, g: f64) -> Result<Self> {
        let ok = [m1, m2, m3, g].iter().all(|v| v.is_finite() && *v > 0.0);
        if !ok {
            return Err(Error::InvalidMasses { masses: [m1, m2, m3], g });
        }
        Ok(Self { m1, m2, m3, g })
    }

    pub fn equal(m: f64, g: f64) -> Result<Self> {
        Self::new(m, m, m, g)
    }

    pub fn masses(&self) -> [f64; 3] {
        [self.m1, self.m2, self.m3]
    }

    pub fn is_equal_mass(&self) -> bool {
        self.m1 == self.m2 && self.m2 == self.m3
    }

    /// `1/M1 = 1/m1 + 1/m2`.
    pub fn reduced_m1(&self) -> f64 {
        self.m1 * self.m2 / (self.m1 + self.m2)
    }

    /// `1/M2 = 1/m3 + 1/(m1 + m2)`.
    pub fn reduced_m2(&self) -> f64 {
        let m12 = self.m1 + self.m2;
        self.m3 * m12 / (self.m3 + m12)
    }

    pub fn total(&self) -> f64 {
        self.m1 + self.m2 + self.m3
    }

    pub fn mu1(&self) -> f64 {
        self.m1 / (self.m1 + self.m2)
    }

    pub fn mu2(&self) -> f64 {
        self.m2 / (self.m1 + self.m2)
    }

    /// Natural curvature scale `G m^3` for the inverse-square problem (equal masses).
    pub fn gm3(&self) -> f64 {
        self.g * self.m1.powi(3)
    }

    /// Natural scale `G m^{5/2}` for the Newtonian problem (equal masses).
    pub fn gm52(&self) -> f64 {
        self.g * self.m1.powf(2.5)
    }
}

/// An unordered pair of bodies, labelled by the bodies it contains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pair {
    P12,
    P23,
    P13,
}

impl Pair {
    /// Label of the binary-collision point of this pair (`C_k` with `k` the spectator).
    pub fn collision_label(self) -> SpecialPoint {
        match self {
            Pair::P12 => SpecialPoint::C3,
            Pair::P23 => SpecialPoint::C1,
            Pair::P13 => SpecialPoint::C2,
        }
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Pair::P12 => "1-2",
            Pair::P23 => "2-3",
            Pair::P13 => "1-3",
        };
        f.write_str(s)
    }
}

/// The four spaces carrying a JM metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Space {
    /// Centre-of-mass configuration space, coordinates `(r, eta, xi1, xi2)`.
    C2,
    /// Shape space, `(r, eta, xi2)`.
    R3,
    /// Quotient of C2 by scaling, `(eta, xi1, xi2)`.
    S3,
    /// Shape sphere, `(eta, xi2)`.
    S2,
}

impl Space {
    pub const ALL: [Space; 4] = [Space::C2, Space::R3, Space::S3, Space::S2];

    pub fn dim(self) -> usize {
        match self {
            Space::C2 => 4,
            Space::R3 | Space::S3 => 3,
            Space::S2 => 2,
        }
    }

    pub fn coordinate_names(self) -> &'static [&'static str] {
        match self {
            Space::C2 => &["r", "eta", "xi1", "xi2"],
            Space::R3 => &["r", "eta", "xi2"],
            Space::S3 => &["eta", "xi1", "xi2"],
            Space::S2 => &["eta", "xi2"],
        }
    }

    pub fn has_radius(self) -> bool {
        matches!(self, Space::C2 | Space::R3)
    }

    pub fn has_xi1(self) -> bool {
        matches!(self, Space::C2 | Space::S3)
    }

    /// Index of `eta` in this chart's coordinate tuple.
    pub fn eta_index(self) -> usize {
        if self.has_radius() {
            1
        } else {
            0
        }
    }

    pub fn xi2_index(self) -> usize {
        self.dim() - 1
    }

    pub fn xi1_index(self) -> Option<usize> {
        match self {
            Space::C2 => Some(2),
            Space::S3 => Some(1),
            _ => None,
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Space::C2 => "C2",
            Space::R3 => "R3",
            Space::S3 => "S3",
            Space::S2 => "S2",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Space {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "C2" => Ok(Space::C2),
            "R3" => Ok(Space::R3),
            "S3" => Ok(Space::S3),
            "S2" => Ok(Space::S2),
            other => Err(Error::InvalidArgument(format!("unknown space `{other}`"))),
        }
    }
}

/// A point in Hopf-type coordinates on one of the four spaces.
///
/// `r` is ignored on S3/S2 and `xi1` on R3/S2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    pub space: Space,
    pub r: f64,
    pub eta: f64,
    pub xi1: f64,
    pub xi2: f64,
}

impl ChartPoint {
    pub fn c2(r: f64, eta: f64, xi1: f64, xi2: f64) -> Self {
        Self { space: Space::C2, r, eta, xi1, xi2 }
    }

    pub fn r3(r: f64, eta: f64, xi2: f64) -> Self {
        Self { space: Space::R3, r, eta, xi1: 0.0, xi2 }
    }

    pub fn s3(eta: f64, xi1: f64, xi2: f64) -> Self {
        Self { space: Space::S3, r: 1.0, eta, xi1, xi2 }
    }

    pub fn s2(eta: f64, xi2: f64) -> Self {
        Self { space: Space::S2, r: 1.0, eta, xi1: 0.0, xi2 }
    }

    /// Coordinates in chart order, zero padded.
    pub fn coords(&self) -> Vec4 {
        let mut v = ZERO_VEC;
        match self.space {
            Space::C2 => v = [self.r, self.eta, self.xi1, self.xi2],
            Space::R3 => v[..3].copy_from_slice(&[self.r, self.eta, self.xi2]),
            Space::S3 => v[..3].copy_from_slice(&[self.eta, self.xi1, self.xi2]),
            Space::S2 => v[..2].copy_from_slice(&[self.eta, self.xi2]),
        }
        v
    }

    pub fn from_coords(space: Space, x: &Vec4) -> Self {
        match space {
            Space::C2 => Self::c2(x[0], x[1], x[2], x[3]),
            Space::R3 => Self::r3(x[0], x[1], x[2]),
            Space::S3 => Self::s3(x[0], x[1], x[2]),
            Space::S2 => Self::s2(x[0], x[1]),
        }
    }

    /// Radius, taken as 1 on the scale quotients.
    pub fn radius(&self) -> f64 {
        if self.space.has_radius() {
            self.r
        } else {
            1.0
        }
    }

    /// Image under the submersion onto `target`.
    ///
    /// Quotienting by rotations sends `xi2 < 0` to `xi2 + pi`, so R3/S2 points
    /// carry `xi2` in `[0, pi)`.
    pub fn project(&self, target: Space) -> Result<Self> {
        let allowed = match (self.space, target) {
            (a, b) if a == b => true,
            (Space::C2, _) => true,
            (Space::R3, Space::S2) | (Space::S3, Space::S2) => true,
            _ => false,
        };
        if !allowed {
            return Err(Error::InvalidQuotient("no submersion between these spaces"));
        }
        let mut p = *self;
        p.space = target;
        if !target.has_xi1() && self.space.has_xi1() {
            p.xi1 = 0.0;
            p.xi2 = self.xi2.rem_euclid(PI);
        }
        if !target.has_radius() {
            p.r = 1.0;
        }
        Ok(p)
    }
}

/// Positions of the three bodies in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarConfig {
    pub x: [C64; 3],
}

impl PlanarConfig {
    pub fn new(x1: C64, x2: C64, x3: C64) -> Self {
        Self { x: [x1, x2, x3] }
    }

    pub fn jacobi(&self, mc: &MassConfig) -> [C64; 3] {
        jacobi_from_positions(self, mc)
    }

    pub fn from_jacobi(j: &[C64; 3], mc: &MassConfig) -> Self {
        positions_from_jacobi(j, mc)
    }

    /// Rescaled Jacobi vectors `z_i = sqrt(M_i) J_i`, i = 1, 2.
    pub fn rescaled(&self, mc: &MassConfig) -> (C64, C64) {
        let j = self.jacobi(mc);
        (j[0] * mc.reduced_m1().sqrt(), j[1] * mc.reduced_m2().sqrt())
    }

    /// Inverse of [`PlanarConfig::rescaled`] for a given centre of mass.
    pub fn from_rescaled(z1: C64, z2: C64, cm: C64, mc: &MassConfig) -> Self {
        let j = [z1 / mc.reduced_m1().sqrt(), z2 / mc.reduced_m2().sqrt(), cm];
        positions_from_jacobi(&j, mc)
    }

    pub fn separation(&self, pair: Pair) -> f64 {
        let [x1, x2, x3] = self.x;
        match pair {
            Pair::P12 => (x1 - x2).norm(),
            Pair::P23 => (x2 - x3).norm(),
            Pair::P13 => (x1 - x3).norm(),
        }
    }
}

pub fn jacobi_from_positions(p: &PlanarConfig, mc: &MassConfig) -> [C64; 3] {
    let [x1, x2, x3] = p.x;
    let (m1, m2, m3) = (mc.m1, mc.m2, mc.m3);
    let cm12 = (x1 * m1 + x2 * m2) / (m1 + m2);
    [x2 - x1, x3 - cm12, (x1 * m1 + x2 * m2 + x3 * m3) / mc.total()]
}

pub fn positions_from_jacobi(j: &[C64; 3], mc: &MassConfig) -> PlanarConfig {
    let [j1, j2, j3] = *j;
    let cm12 = j3 - j2 * (mc.m3 / mc.total());
    PlanarConfig { x: [cm12 - j1 * mc.mu2(), cm12 + j1 * mc.mu1(), cm12 + j2] }
}

/// Hopf coordinates of `(z1, z2)` on C2.
///
/// The representative is chosen with `xi2` in `(-pi/2, pi/2]` and `xi1` in
/// `[0, 2 pi)`, using `(xi1, xi2) ~ (xi1 + pi, xi2 +- pi)`. Where only one
/// combination of the angles is defined (eta = 0 or pi/2), `xi2 = 0`.
pub fn hopf_from_rescaled(z1: C64, z2: C64) -> Result<ChartPoint> {
    let (n1, n2) = (z1.norm(), z2.norm());
    let r = n1.hypot(n2);
    if r == 0.0 {
        return Err(Error::ZeroSize);
    }
    let eta = n1.atan2(n2);
    let (xi1, xi2) = if n1 == 0.0 {
        (z2.arg(), 0.0)
    } else if n2 == 0.0 {
        (z1.arg(), 0.0)
    } else {
        let (a1, a2) = (z1.arg(), z2.arg());
        ((a1 + a2) / 2.0, (a1 - a2) / 2.0)
    };
    let (xi1, xi2) = canonical_angles(xi1, xi2);
    Ok(ChartPoint::c2(r, eta, xi1, xi2))
}

fn canonical_angles(mut xi1: f64, mut xi2: f64) -> (f64, f64) {
    while xi2 > FRAC_PI_2 {
        xi2 -= PI;
        xi1 += PI;
    }
    while xi2 <= -FRAC_PI_2 {
        xi2 += PI;
        xi1 += PI;
    }
    let mut xi1 = xi1.rem_euclid(TAU);
    if xi1 >= TAU {
        xi1 -= TAU;
    }
    (xi1, xi2)
}

/// Inverse of [`hopf_from_rescaled`]. Points on R3/S2 are lifted with `xi1 = 0`,
/// points on S3/S2 with `r = 1`.
pub fn rescaled_from_hopf(p: &ChartPoint) -> (C64, C64) {
    let r = p.radius();
    let xi1 = if p.space.has_xi1() { p.xi1 } else { 0.0 };
    let z1 = C64::from_polar(r * p.eta.sin(), xi1 + p.xi2);
    let z2 = C64::from_polar(r * p.eta.cos(), xi1 - p.xi2);
    (z1, z2)
}

/// Cartesian coordinates `w` of the Hopf image in R3, `|w| = r^2 / 2`.
pub fn shape_cartesian(p: &ChartPoint) -> [f64; 3] {
    let r2 = p.radius().powi(2);
    let (s2e, c2e) = (2.0 * p.eta).sin_cos();
    let (s2x, c2x) = (2.0 * p.xi2).sin_cos();
    [0.5 * r2 * s2e * c2x, 0.5 * r2 * s2e * s2x, 0.5 * r2 * c2e]
}

/// Azimuth `theta` and co-latitude `phi` on the shape sphere, in which the
/// Lagrange points sit at the poles.
///
/// Fails with [`Error::ThetaUndefined`] (carrying `phi`) when `cos(phi) = 0`.
pub fn theta_phi_from_hopf(eta: f64, xi2: f64) -> Result<(f64, f64)> {
    let (s2e, c2e) = (2.0 * eta).sin_cos();
    let (s2x, c2x) = (2.0 * xi2).sin_cos();
    let sin_phi = s2e * s2x;
    let a = s2e * c2x; // cos(phi) sin(theta)
    let b = -c2e; // cos(phi) cos(theta)
    let cos_phi = a.hypot(b);
    let phi = sin_phi.atan2(cos_phi);
    if cos_phi < 1e-14 {
        return Err(Error::ThetaUndefined { phi });
    }
    Ok((a.atan2(b), phi))
}

/// Named equal-mass configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpecialPoint {
    L4,
    L5,
    E1,
    E2,
    E3,
    C1,
    C2,
    C3,
}

impl SpecialPoint {
    pub const ALL: [SpecialPoint; 8] = [
        SpecialPoint::L4,
        SpecialPoint::L5,
        SpecialPoint::E1,
        SpecialPoint::E2,
        SpecialPoint::E3,
        SpecialPoint::C1,
        SpecialPoint::C2,
        SpecialPoint::C3,
    ];
}

impl fmt::Display for SpecialPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl std::str::FromStr for SpecialPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SpecialPoint::ALL
            .into_iter()
            .find(|p| p.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown special point `{s}`")))
    }
}

/// Location of a special configuration on C2 (`r = 1`, `xi1 = 0`), equal masses.
pub fn special_point(label: SpecialPoint) -> ChartPoint {
    let (eta, xi2) = match label {
        SpecialPoint::L4 => (FRAC_PI_4, FRAC_PI_4),
        SpecialPoint::L5 => (FRAC_PI_4, -FRAC_PI_4),
        SpecialPoint::C3 => (0.0, 0.0),
        SpecialPoint::C1 => (FRAC_PI_3, 0.0),
        SpecialPoint::C2 => (FRAC_PI_3, FRAC_PI_2),
        SpecialPoint::E3 => (FRAC_PI_2, 0.0),
        SpecialPoint::E1 => (euler_eta(0, FRAC_PI_2), FRAC_PI_2),
        SpecialPoint::E2 => (euler_eta(1, 0.0), 0.0),
    };
    ChartPoint::c2(1.0, eta, 0.0, xi2)
}

/// eta on the collinear slice `xi2` where body `body` sits at the midpoint of
/// the other two. Located by bisection on the signed offset from the midpoint.
fn euler_eta(body: usize, xi2: f64) -> f64 {
    let mc = MassConfig::default();
    let along = C64::from_polar(1.0, xi2);
    let offset = |eta: f64| {
        let (z1, z2) = rescaled_from_hopf(&ChartPoint::c2(1.0, eta, 0.0, xi2));
        let x = PlanarConfig::from_rescaled(z1, z2, C64::new(0.0, 0.0), &mc).x;
        let (a, b) = match body {
            0 => (x[1], x[2]),
            1 => (x[0], x[2]),
            _ => (x[0], x[1]),
        };
        let d = x[body] - (a + b) * 0.5;
        (d * along.conj()).re
    };
    // The midpoint lies strictly between the 1-2 collision and the next
    // collision on this slice; scan for the sign change, then bisect.
    let n = 64;
    let (lo, hi) = (1e-6, FRAC_PI_2 - 1e-6);
    let grid: Vec<f64> = (0..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect();
    for w in grid.windows(2) {
        if offset(w[0]).signum() != offset(w[1]).signum() {
            if let Ok(root) = bisect(offset, w[0], w[1], 1e-13) {
                return root;
            }
        }
    }
    FRAC_PI_6
}

/// Bisection root of `f` on `[lo, hi]` to absolute tolerance `tol`.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NoBracket { lo, hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Equilateral configuration of size `r` on C2 for any masses, with `xi1 = 0`,
/// oriented as L4.
pub fn equilateral_point(mc: &MassConfig, r: f64) -> Result<ChartPoint> {
    let w = C64::from_polar(1.0, 2.0 * PI / 3.0);
    let tri = PlanarConfig::new(C64::new(1.0, 0.0), w * w, w);
    let (z1, z2) = tri.rescaled(mc);
    let p = hopf_from_rescaled(z1, z2)?;
    Ok(ChartPoint { r, xi1: 0.0, ..p })
}

/// The C2 point of the same configuration with bodies relabelled so that
/// new body `i` is old body `perm[i]`. Masses are permuted accordingly; for
/// equal masses the metric is unchanged.
pub fn permute_bodies(p: &ChartPoint, perm: [usize; 3], mc: &MassConfig) -> Result<(ChartPoint, MassConfig)> {
    if p.space != Space::C2 {
        return Err(Error::InvalidArgument("relabelling acts on C2 points".into()));
    }
    let mut seen = [false; 3];
    for &i in &perm {
        if i > 2 || seen[i] {
            return Err(Error::InvalidArgument(format!("not a permutation: {perm:?}")));
        }
        seen[i] = true;
    }
    let (z1, z2) = rescaled_from_hopf(p);
    let x = PlanarConfig::from_rescaled(z1, z2, C64::new(0.0, 0.0), mc).x;
    let m = mc.masses();
    let nmc = MassConfig::new(m[perm[0]], m[perm[1]], m[perm[2]], mc.g)?;
    let moved = PlanarConfig::new(x[perm[0]], x[perm[1]], x[perm[2]]);
    let (w1, w2) = moved.rescaled(&nmc);
    Ok((hopf_from_rescaled(w1, w2)?, nmc))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn reduced_masses_reconstruct() {
        let mc = MassConfig::new(1.0, 2.0, 3.0, 1.0).unwrap();
        let m1 = mc.reduced_m1();
        let m2 = mc.reduced_m2();
        assert!((1.0 / m1 - (1.0 / 1.0 + 1.0 / 2.0)).abs() < 1e-15);
        assert!((1.0 / m2 - (1.0 / 3.0 + 1.0 / 3.0)).abs() < 1e-15);
        assert_eq!(mc.total(), 6.0);
        assert!((mc.mu1() - 1.0 / 3.0).abs() < 1e-15);
        assert!((mc.mu2() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_nonpositive_masses() {
        assert!(MassConfig::new(1.0, 0.0, 1.0, 1.0).is_err());
        assert!(MassConfig::new(1.0, 1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn jacobi_examples() {
        let mc = MassConfig::default();
        let zero = PlanarConfig::new(c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        assert!(zero.jacobi(&mc).iter().all(|j| j.norm() == 0.0));

        let line = PlanarConfig::new(c(-0.5, 0.0), c(0.5, 0.0), c(0.0, 0.0));
        let j = line.jacobi(&mc);
        assert!(close(j[0], c(1.0, 0.0), 1e-15));
        assert!(close(j[1], c(0.0, 0.0), 1e-15));
        assert!(close(j[2], c(0.0, 0.0), 1e-15));

        // x = (0, 1, i): J1 = 1, J2 = i - 1/2, J3 = (1 + i)/3, by hand.
        let p = PlanarConfig::new(c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
        let j = p.jacobi(&mc);
        assert!(close(j[0], c(1.0, 0.0), 1e-15));
        assert!(close(j[1], c(-0.5, 1.0), 1e-15));
        assert!(close(j[2], c(1.0 / 3.0, 1.0 / 3.0), 1e-15));
    }

    #[test]
    fn hopf_examples() {
        let p = hopf_from_rescaled(c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        assert_eq!((p.r, p.eta, p.xi1, p.xi2), (1.0, 0.0, 0.0, 0.0));

        let p = hopf_from_rescaled(c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!((p.r - 1.0).abs() < 1e-15 && (p.eta - FRAC_PI_2).abs() < 1e-15);

        let s = 0.5f64.sqrt();
        let p = hopf_from_rescaled(c(0.0, s), c(s, 0.0)).unwrap();
        assert!((p.r - 1.0).abs() < 1e-15);
        assert!((p.eta - FRAC_PI_4).abs() < 1e-15);
        assert!((p.xi1 - FRAC_PI_4).abs() < 1e-15);
        assert!((p.xi2 - FRAC_PI_4).abs() < 1e-15);

        let (z1, z2) = rescaled_from_hopf(&p);
        assert!(close(z1, c(0.0, s), 1e-15) && close(z2, c(s, 0.0), 1e-15));
    }

    #[test]
    fn zero_size_is_an_error() {
        assert_eq!(hopf_from_rescaled(c(0.0, 0.0), c(0.0, 0.0)), Err(Error::ZeroSize));
    }

    #[test]
    fn shape_cartesian_examples() {
        let w = shape_cartesian(&ChartPoint::c2(1.0, 0.0, 0.0, 0.0));
        assert_eq!(w, [0.0, 0.0, 0.5]);
        let w = shape_cartesian(&ChartPoint::s2(FRAC_PI_4, FRAC_PI_4));
        assert!(w[0].abs() < 1e-15 && (w[1] - 0.5).abs() < 1e-15 && w[2].abs() < 1e-15);
    }

    #[test]
    fn theta_phi_at_lagrange_is_a_pole() {
        match theta_phi_from_hopf(FRAC_PI_4, FRAC_PI_4) {
            Err(Error::ThetaUndefined { phi }) => assert!((phi.sin() - 1.0).abs() < 1e-12),
            other => panic!("expected pole, got {other:?}"),
        }
        let (theta, phi) = theta_phi_from_hopf(FRAC_PI_2, 0.3).unwrap();
        assert!(phi.sin().abs() < 1e-15);
        assert!((theta.sin() * phi.cos()).abs() < 1e-15);
        assert!((theta.cos() * phi.cos() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn special_points() {
        let l4 = special_point(SpecialPoint::L4);
        assert_eq!((l4.eta, l4.xi2), (FRAC_PI_4, FRAC_PI_4));
        let c1 = special_point(SpecialPoint::C1);
        assert_eq!((c1.eta, c1.xi2), (FRAC_PI_3, 0.0));
        for label in [SpecialPoint::E1, SpecialPoint::E2] {
            let e = special_point(label);
            assert!((e.eta - FRAC_PI_6).abs() < 1e-12, "{label}: {}", e.eta);
        }
        assert_eq!(special_point(SpecialPoint::E1).xi2, FRAC_PI_2);
        assert_eq!(special_point(SpecialPoint::E2).xi2, 0.0);
    }

    #[test]
    fn special_point_collisions_are_collisions() {
        let mc = MassConfig::default();
        for (label, pair) in
            [(SpecialPoint::C1, Pair::P23), (SpecialPoint::C2, Pair::P13), (SpecialPoint::C3, Pair::P12)]
        {
            let (z1, z2) = rescaled_from_hopf(&special_point(label));
            let x = PlanarConfig::from_rescaled(z1, z2, c(0.0, 0.0), &mc);
            assert!(x.separation(pair) < 1e-15, "{label}");
            assert_eq!(pair.collision_label(), label);
        }
    }

    #[test]
    fn projection_to_shape_space_folds_xi2() {
        let p = ChartPoint::c2(2.0, 0.3, 1.0, -0.4);
        let q = p.project(Space::R3).unwrap();
        assert!((q.xi2 - (PI - 0.4)).abs() < 1e-15);
        assert_eq!(q.r, 2.0);
        let s = p.project(Space::S2).unwrap();
        assert_eq!(s.r, 1.0);
        assert!(q.project(Space::S3).is_err());
    }

    #[test]
    fn bisect_requires_bracket() {
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
        let root = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((root - 2f64.sqrt()).abs() < 1e-13);
    }
}
