//! Cell-centred `(eta, xi2)` grids and the thread pool used to evaluate them.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "JM3BODY_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_eta: usize,
    pub n_xi2: usize,
    pub eta_range: (f64, f64),
    pub xi2_range: (f64, f64),
    /// Points closer than this to a collision locus (or to the `eta = 0`,
    /// `eta = pi/2` chart edges) are skipped.
    pub exclusion: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self::square(400)
    }
}

impl GridSpec {
    /// `n x n` over `(0, pi/2) x (0, pi)` with exclusion radius `1e-3`.
    pub fn square(n: usize) -> Self {
        Self { n_eta: n, n_xi2: n, eta_range: (0.0, FRAC_PI_2), xi2_range: (0.0, PI), exclusion: 1e-3 }
    }

    pub fn with_size(self, n_eta: usize, n_xi2: usize) -> Self {
        Self { n_eta, n_xi2, ..self }
    }

    pub fn with_exclusion(self, exclusion: f64) -> Self {
        Self { exclusion, ..self }
    }

    /// Parses `NxM`.
    pub fn parse_size(s: &str) -> Result<(usize, usize)> {
        let bad = || Error::InvalidArgument(format!("grid must look like NxM, got `{s}`"));
        let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
        let n: usize = a.trim().parse().map_err(|_| bad())?;
        let m: usize = b.trim().parse().map_err(|_| bad())?;
        if n == 0 || m == 0 {
            return Err(bad());
        }
        Ok((n, m))
    }

    pub fn eta_step(&self) -> f64 {
        (self.eta_range.1 - self.eta_range.0) / self.n_eta as f64
    }

    pub fn xi2_step(&self) -> f64 {
        (self.xi2_range.1 - self.xi2_range.0) / self.n_xi2 as f64
    }

    /// All cell centres, `eta`-major.
    pub fn cells(&self) -> Vec<(f64, f64)> {
        let (de, dx) = (self.eta_step(), self.xi2_step());
        let mut out = Vec::with_capacity(self.n_eta * self.n_xi2);
        for i in 0..self.n_eta {
            let eta = self.eta_range.0 + (i as f64 + 0.5) * de;
            for j in 0..self.n_xi2 {
                out.push((eta, self.xi2_range.0 + (j as f64 + 0.5) * dx));
            }
        }
        out
    }

    /// Cell centres that survive the exclusion.
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.cells().into_iter().filter(|&(e, x)| !self.excluded(e, x)).collect()
    }

    pub fn excluded(&self, eta: f64, xi2: f64) -> bool {
        singular_distance(eta, xi2) < self.exclusion
    }
}

/// Coordinate distance from `(eta, xi2)` to the nearest collision: C3
/// (`eta = 0`), C1 (`pi/3, 0`) or C2 (`pi/3, pi/2`), with `xi2` modulo `pi`.
pub fn collision_distance(eta: f64, xi2: f64) -> f64 {
    let to = |x0: f64| {
        let d = (xi2 - x0).rem_euclid(PI);
        let dx = d.min(PI - d);
        (eta - FRAC_PI_3).hypot(dx)
    };
    eta.abs().min(to(0.0)).min(to(FRAC_PI_2))
}

/// [`collision_distance`] including the `eta = pi/2` chart edge.
pub fn singular_distance(eta: f64, xi2: f64) -> f64 {
    collision_distance(eta, xi2).min((FRAC_PI_2 - eta).abs())
}

/// Thread count from [`THREADS_ENV`], if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n: &usize| n > 0)
}

/// Maps `f` over `items` in parallel, preserving order.
pub fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    let run = || items.par_iter().map(&f).collect();
    match thread_cap().and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(run),
        None => run(),
    }
}
