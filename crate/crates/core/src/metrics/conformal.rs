//! Angular part of the potential as a function of `(eta, xi2)`.
//!
//! For either potential `V = -W(eta, xi2) / r^n` with `n = 2` (inverse-square)
//! or `n = 1` (Newtonian), and `W = sum_k a_k D_k^{-n/2}` over the three pairs,
//! where `|x_i - x_j|^2 = r^2 D_k / M` and
//! `D_k = p + q cos 2eta + beta sin 2eta cos 2xi2`. For the 1-2 pair
//! `D = sin^2 eta`; for the other two `p = (1 + beta^2)/2`, `q = (1 - beta^2)/2`.

use serde::Serialize;

use crate::coords::{MassConfig, Pair};
use crate::error::{Error, Result};

use super::PotentialKind;

/// Squared pair distance (over `r^2`) below which a point counts as a collision.
pub const COLLISION_EPS: f64 = 1e-14;

/// A scalar on `(eta, xi2)` with its first and second partials.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Jet {
    pub value: f64,
    pub d_eta: f64,
    pub d_xi2: f64,
    pub d_eta_eta: f64,
    pub d_eta_xi2: f64,
    pub d_xi2_xi2: f64,
}

impl Jet {
    pub fn scale(&self, s: f64) -> Jet {
        Jet {
            value: s * self.value,
            d_eta: s * self.d_eta,
            d_xi2: s * self.d_xi2,
            d_eta_eta: s * self.d_eta_eta,
            d_eta_xi2: s * self.d_eta_xi2,
            d_xi2_xi2: s * self.d_xi2_xi2,
        }
    }

    fn add(&mut self, o: &Jet) {
        self.value += o.value;
        self.d_eta += o.d_eta;
        self.d_xi2 += o.d_xi2;
        self.d_eta_eta += o.d_eta_eta;
        self.d_eta_xi2 += o.d_eta_xi2;
        self.d_xi2_xi2 += o.d_xi2_xi2;
    }

    /// `|grad f|^2` and `Laplacian f` for the round sphere of radius 1/2,
    /// `d eta^2 + sin^2(2 eta) d xi2^2`.
    pub fn round_grad_laplace(&self, eta: f64) -> Result<(f64, f64)> {
        let s = (2.0 * eta).sin();
        if s.abs() < 1e-12 {
            return Err(Error::ChartSingular { eta });
        }
        let cot = (2.0 * eta).cos() / s;
        let grad = self.d_xi2 * self.d_xi2 / (s * s) + self.d_eta * self.d_eta;
        let lap = self.d_xi2_xi2 / (s * s) + 2.0 * cot * self.d_eta + self.d_eta_eta;
        Ok((grad, lap))
    }
}

/// One pairwise term `a D^{-k}` of the angular potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairTerm {
    pub pair: Pair,
    pub p: f64,
    pub q: f64,
    pub beta: f64,
    /// Coefficient for the inverse-square potential, `G m_i m_j M`.
    pub a_inverse_square: f64,
    /// Coefficient for the Newtonian potential, `G m_i m_j sqrt(M)`.
    pub a_newtonian: f64,
}

impl PairTerm {
    pub fn coefficient(&self, potential: PotentialKind) -> f64 {
        match potential {
            PotentialKind::InverseSquare => self.a_inverse_square,
            PotentialKind::Newtonian => self.a_newtonian,
        }
    }

    /// `D(eta, xi2)`, proportional to the squared separation of the pair.
    pub fn d_value(&self, eta: f64, xi2: f64) -> f64 {
        self.p + self.q * (2.0 * eta).cos() + self.beta * (2.0 * eta).sin() * (2.0 * xi2).cos()
    }

    /// Jet of `a D^{-k}`.
    pub fn jet(&self, a: f64, k: f64, eta: f64, xi2: f64) -> Result<Jet> {
        let (b, q) = (self.beta, self.q);
        let (s2e, c2e) = (2.0 * eta).sin_cos();
        let (s2x, c2x) = (2.0 * xi2).sin_cos();
        let d = self.d_value(eta, xi2);
        if d < COLLISION_EPS {
            return Err(Error::CollisionPole { pair: self.pair });
        }
        let de = -2.0 * q * s2e + 2.0 * b * c2e * c2x;
        let dx = -2.0 * b * s2e * s2x;
        let dee = -4.0 * q * c2e - 4.0 * b * s2e * c2x;
        let dex = -4.0 * b * c2e * s2x;
        let dxx = -4.0 * b * s2e * c2x;

        let f = a * d.powf(-k);
        let f1 = -k * f / d;
        let f2 = k * (k + 1.0) * f / (d * d);
        Ok(Jet {
            value: f,
            d_eta: f1 * de,
            d_xi2: f1 * dx,
            d_eta_eta: f2 * de * de + f1 * dee,
            d_eta_xi2: f2 * de * dx + f1 * dex,
            d_xi2_xi2: f2 * dx * dx + f1 * dxx,
        })
    }
}

/// The three pair terms for a mass configuration, ordered (2-3, 1-3, 1-2) so
/// that index `i` is the term whose collision is `C_{i+1}`.
pub fn pair_terms(mc: &MassConfig) -> [PairTerm; 3] {
    let (m1, m2, m3, g) = (mc.m1, mc.m2, mc.m3, mc.g);
    let (big1, big2) = (mc.reduced_m1(), mc.reduced_m2());
    let ratio = (big2 / big1).sqrt();
    let mixed = |beta: f64| (0.5 * (1.0 + beta * beta), 0.5 * (1.0 - beta * beta));
    let (b23, b13) = (-mc.mu1() * ratio, mc.mu2() * ratio);
    [
        PairTerm {
            pair: Pair::P23,
            p: mixed(b23).0,
            q: mixed(b23).1,
            beta: b23,
            a_inverse_square: g * m2 * m3 * big2,
            a_newtonian: g * m2 * m3 * big2.sqrt(),
        },
        PairTerm {
            pair: Pair::P13,
            p: mixed(b13).0,
            q: mixed(b13).1,
            beta: b13,
            a_inverse_square: g * m1 * m3 * big2,
            a_newtonian: g * m1 * m3 * big2.sqrt(),
        },
        PairTerm {
            pair: Pair::P12,
            p: 0.5,
            q: -0.5,
            beta: 0.0,
            a_inverse_square: g * m1 * m2 * big1,
            a_newtonian: g * m1 * m2 * big1.sqrt(),
        },
    ]
}

/// Jet of the dimensional angular potential `W` (`V = -W / r^n`).
pub fn angular_potential(mc: &MassConfig, potential: PotentialKind, eta: f64, xi2: f64) -> Result<Jet> {
    let k = potential.exponent() / 2.0;
    let mut total = Jet::default();
    for term in pair_terms(mc) {
        total.add(&term.jet(term.coefficient(potential), k, eta, xi2)?);
    }
    Ok(total)
}

/// Equal-mass `(v1, v2, v3)`, `v_i = r^2 / (m |x_j - x_k|^2)`.
pub fn conformal_v(eta: f64, xi2: f64) -> Result<[f64; 3]> {
    let terms = pair_terms(&MassConfig::default());
    let mut v = [0.0; 3];
    for (vi, term) in v.iter_mut().zip(terms.iter()) {
        *vi = term.jet(term.a_inverse_square, 1.0, eta, xi2)?.value;
    }
    Ok(v)
}

/// Equal-mass conformal factor `h = W / (G m^3)` with the `v_i` and derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConformalData {
    pub eta: f64,
    pub xi2: f64,
    pub h: f64,
    pub v: [f64; 3],
    pub jet: Jet,
    /// `|grad h|^2` on the radius-1/2 round sphere; `None` where `sin 2eta = 0`.
    pub grad_sq: Option<f64>,
    /// Round-sphere Laplacian of `h`; `None` where `sin 2eta = 0`.
    pub laplacian: Option<f64>,
}

pub fn conformal_h(eta: f64, xi2: f64) -> Result<ConformalData> {
    let v = conformal_v(eta, xi2)?;
    let jet = angular_potential(&MassConfig::default(), PotentialKind::InverseSquare, eta, xi2)?;
    let gl = jet.round_grad_laplace(eta).ok();
    Ok(ConformalData { eta, xi2, h: jet.value, v, jet, grad_sq: gl.map(|x| x.0), laplacian: gl.map(|x| x.1) })
}

/// Inverse-square conformal factor `h~` for arbitrary masses.
pub fn htilde(eta: f64, xi2: f64, mc: &MassConfig) -> Result<f64> {
    Ok(angular_potential(mc, PotentialKind::InverseSquare, eta, xi2)?.value)
}

/// Equal-mass Newtonian `U = W / (G m^{5/2})`, so that `V = -G m^{5/2} U / r`.
pub fn newtonian_u(eta: f64, xi2: f64) -> Result<Jet> {
    angular_potential(&MassConfig::default(), PotentialKind::Newtonian, eta, xi2)
}
