//! Power sums of the equal-mass `v_i` and the bounds built from them.

use serde::Serialize;

use crate::error::Result;
use crate::metrics::conformal_v;

/// `u_{2n} = sum v_i^n` for `n = 1, 2, 4`, with the derived quantities
/// `s = |grad h|^2 / 4`, `A`, `B` and `(12 h^2 + |grad h|^2) / h^3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerSums {
    pub eta: f64,
    pub xi2: f64,
    pub v: [f64; 3],
    pub u2: f64,
    pub u4: f64,
    pub u8: f64,
    pub s: f64,
    pub a: f64,
    pub b: f64,
    pub zeta_ratio: f64,
}

impl PowerSums {
    /// `h = u2`.
    pub fn h(&self) -> f64 {
        self.u2
    }

    pub fn grad_sq(&self) -> f64 {
        4.0 * self.s
    }

    /// `12 h^2 + |grad h|^2 - u2^3 (8A + 6B)`.
    pub fn identity_residual(&self) -> f64 {
        let h = self.u2;
        12.0 * h * h + self.grad_sq() - h.powi(3) * (8.0 * self.a + 6.0 * self.b)
    }
}

pub fn power_sums(eta: f64, xi2: f64) -> Result<PowerSums> {
    let v = conformal_v(eta, xi2)?;
    let u2: f64 = v.iter().sum();
    let u4: f64 = v.iter().map(|x| x * x).sum();
    let u8: f64 = v.iter().map(|x| x.powi(4)).sum();
    let s = 0.5 * (-2.0 * u2 * u2 + 4.0 * u2 * u4 - 3.0 * u4 * u4 + 3.0 * u8);
    let a = (u2 + u4) / (u2 * u2);
    let b = (u8 - u4 * u4) / u2.powi(3);
    Ok(PowerSums { eta, xi2, v, u2, u4, u8, s, a, b, zeta_ratio: (12.0 * u2 * u2 + 4.0 * s) / u2.powi(3) })
}

/// Lower bound for `B` used in the sufficiency argument.
pub const B_BOUND: f64 = -0.5;
/// The constant in `12 h^2 + |grad h|^2 > zeta h^3`.
pub const ZETA: f64 = 55.0 / 27.0;

/// `(3/8) (20 - 3 (c^2 + s^2)^2 - 8 c^3 + 24 c s^2)` in `c = cos 2eta`,
/// `s = sin 2eta cos 2xi2`.
pub fn b_polynomial(c: f64, s: f64) -> f64 {
    let rho2 = c * c + s * s;
    0.375 * (20.0 - 3.0 * rho2 * rho2 - 8.0 * c.powi(3) + 24.0 * c * s * s)
}

/// `17 - 8 c^3 + 24 c s^2`, positive on the unit disk.
pub fn b_sufficiency(c: f64, s: f64) -> f64 {
    17.0 - 8.0 * c.powi(3) + 24.0 * c * s * s
}

/// `(c, s)` for a shape-sphere point.
pub fn cs_variables(eta: f64, xi2: f64) -> (f64, f64) {
    let (s2e, c2e) = (2.0 * eta).sin_cos();
    (c2e, s2e * (2.0 * xi2).cos())
}

/// `A = (5 cos 6eta + 22) / 27` on the boundary `xi2 in {0, pi/2}`.
pub fn boundary_a(eta: f64) -> f64 {
    (5.0 * (6.0 * eta).cos() + 22.0) / 27.0
}
