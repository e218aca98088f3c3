//! Brute-force Rényi divergences computed straight from output distributions.
//!
//! Nothing here uses the closed forms in [`crate::rdp`]; the oracle sums or
//! integrates `P^alpha Q^{1-alpha}` directly and reports an error bound with
//! every value, so the closed forms can be checked against it.

mod discrete;
mod pairs;
mod quadrature;

pub use discrete::{renyi_discrete, renyi_discrete_laplace};
pub use pairs::{
    mechanism_worst_pair, random_bounded_ratio_pair, random_dp_pair, BrThreshold, WorstPair,
    RAPPOR_ORACLE_MAX_D,
};
pub use quadrature::{adaptive_simpson, renyi_continuous};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Mass sums must be within this of one.
pub const MASS_SUM_TOLERANCE: f64 = 1e-12;

/// A probability mass function on the integers `offset .. offset + mass.len()`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteDist {
    offset: i64,
    mass: Vec<f64>,
}

impl DiscreteDist {
    pub fn new(offset: i64, mass: Vec<f64>) -> Result<Self> {
        if mass.is_empty() {
            return Err(domain("distribution needs at least one outcome"));
        }
        if let Some(bad) = mass.iter().find(|m| !(m.is_finite() && **m >= 0.0)) {
            return Err(domain(format!("masses must be finite and >= 0, got {bad}")));
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > MASS_SUM_TOLERANCE {
            return Err(domain(format!("masses sum to {total}, not 1")));
        }
        Ok(Self { offset, mass })
    }

    /// Distribution on `0 .. mass.len()`.
    pub fn from_masses(mass: Vec<f64>) -> Result<Self> {
        Self::new(0, mass)
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn masses(&self) -> &[f64] {
        &self.mass
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    /// Mass at integer `x`, zero off the support.
    pub fn mass_at(&self, x: i64) -> f64 {
        let i = x - self.offset;
        if i < 0 || i as usize >= self.mass.len() {
            0.0
        } else {
            self.mass[i as usize]
        }
    }

    /// Smallest and largest index, inclusive.
    pub fn index_range(&self) -> (i64, i64) {
        (self.offset, self.offset + self.mass.len() as i64 - 1)
    }
}

/// A log-density on the real line.
pub type LogDensity = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// Two densities given by their logarithms.
///
/// Both log-densities must be smooth between consecutive `singular` points and
/// affine outside the outermost ones; the tails are then handled analytically.
pub struct ContinuousDensityPair {
    pub log_p: LogDensity,
    pub log_q: LogDensity,
    singular: Vec<f64>,
}

impl ContinuousDensityPair {
    pub fn new(log_p: LogDensity, log_q: LogDensity, mut singular: Vec<f64>) -> Result<Self> {
        if singular.iter().any(|s| !s.is_finite()) {
            return Err(domain("singular points must be finite"));
        }
        singular.sort_by(f64::total_cmp);
        singular.dedup();
        if singular.is_empty() {
            singular.push(0.0);
        }
        Ok(Self {
            log_p,
            log_q,
            singular,
        })
    }

    pub fn singular_points(&self) -> &[f64] {
        &self.singular
    }
}

impl std::fmt::Debug for ContinuousDensityPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ContinuousDensityPair")
            .field("singular", &self.singular)
            .finish_non_exhaustive()
    }
}

/// An oracle value with a bound on its truncation, quadrature and rounding error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub value: f64,
    pub error_bound: f64,
}

impl OracleResult {
    /// Whether `candidate` agrees with the oracle to `max(rel * |value|, error_bound)`.
    pub fn agrees_with(&self, candidate: f64, rel: f64) -> bool {
        (candidate - self.value).abs() <= self.tolerance(rel)
    }

    pub fn tolerance(&self, rel: f64) -> f64 {
        (rel * self.value.abs()).max(self.error_bound)
    }
}
