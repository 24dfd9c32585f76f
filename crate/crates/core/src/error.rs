use thiserror::Error;

use crate::coords::Pair;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("masses and G must be strictly positive (got m = {masses:?}, G = {g})")]
    InvalidMasses { masses: [f64; 3], g: f64 },

    /// Both rescaled Jacobi vectors vanish: the triple collision has no chart point.
    #[error("triple collision: (z1, z2) = (0, 0) has no Hopf coordinates")]
    ZeroSize,

    #[error("azimuth undefined at a pole of the (theta, phi) chart (phi = {phi})")]
    ThetaUndefined { phi: f64 },

    #[error("coordinate chart is singular at eta = {eta} (sin 2 eta = 0)")]
    ChartSingular { eta: f64 },

    #[error("collision of bodies {pair} (pair separation below threshold)")]
    CollisionPole { pair: Pair },

    #[error("point lies outside the Hill region (E - V = {conformal})")]
    OutsideHill { conformal: f64 },

    #[error("invalid quotient metric: {0}")]
    InvalidQuotient(&'static str),

    #[error("tangent vectors span a degenerate plane (Ar^2 = {area_sq})")]
    DegeneratePlane { area_sq: f64 },

    #[error("metric is not positive definite at the requested point")]
    DegenerateMetric,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("root bracket [{lo}, {hi}] does not contain a sign change")]
    NoBracket { lo: f64, hi: f64 },

    #[error("integration failed: {0}")]
    Integration(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
