//! Mechanism descriptions and Rényi orders.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, require_positive, Result};

/// A pure-DP mechanism family together with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mechanism {
    /// The worst case over all `eps`-DP mechanisms (binary randomized response).
    GenericDp { eps: f64 },
    /// Continuous Laplace noise calibrated to `eps`-DP.
    Laplace { eps: f64 },
    /// Discrete Laplace noise for an integer query with sensitivity `delta`.
    DiscreteLaplace { eps: f64, delta: u64 },
    /// `k`-ary randomized response.
    Krr { eps: f64, k: u64 },
    /// Basic one-hot RAPPOR over `d` symbols.
    Rappor { eps: f64, d: u64 },
    /// The class of `eta`-bounded-range mechanisms.
    BoundedRange { eta: f64 },
}

impl Mechanism {
    pub fn generic_dp(eps: f64) -> Result<Self> {
        Self::GenericDp { eps }.validated()
    }

    pub fn laplace(eps: f64) -> Result<Self> {
        Self::Laplace { eps }.validated()
    }

    pub fn discrete_laplace(eps: f64, delta: u64) -> Result<Self> {
        Self::DiscreteLaplace { eps, delta }.validated()
    }

    pub fn krr(eps: f64, k: u64) -> Result<Self> {
        Self::Krr { eps, k }.validated()
    }

    pub fn rappor(eps: f64, d: u64) -> Result<Self> {
        Self::Rappor { eps, d }.validated()
    }

    pub fn bounded_range(eta: f64) -> Result<Self> {
        Self::BoundedRange { eta }.validated()
    }

    /// Checks the parameter invariants and hands the value back.
    pub fn validated(self) -> Result<Self> {
        match self {
            Self::GenericDp { eps } | Self::Laplace { eps } => require_positive("eps", eps)?,
            Self::DiscreteLaplace { eps, delta } => {
                require_positive("eps", eps)?;
                if delta < 1 {
                    return Err(domain("discrete Laplace sensitivity delta must be >= 1"));
                }
            }
            Self::Krr { eps, k } => {
                require_positive("eps", eps)?;
                if k < 2 {
                    return Err(domain(format!("k-RR needs k >= 2, got {k}")));
                }
            }
            Self::Rappor { eps, d } => {
                require_positive("eps", eps)?;
                if d < 2 {
                    return Err(domain(format!("RAPPOR needs d >= 2, got {d}")));
                }
            }
            Self::BoundedRange { eta } => require_positive("eta", eta)?,
        }
        Ok(self)
    }

    /// Short machine name, as used on the command line.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::GenericDp { .. } => "generic",
            Self::Laplace { .. } => "laplace",
            Self::DiscreteLaplace { .. } => "dlaplace",
            Self::Krr { .. } => "krr",
            Self::Rappor { .. } => "rappor",
            Self::BoundedRange { .. } => "br",
        }
    }

    /// The pure-DP parameter: `eps`, or `eta` for bounded range.
    pub fn privacy_parameter(&self) -> f64 {
        match *self {
            Self::GenericDp { eps }
            | Self::Laplace { eps }
            | Self::DiscreteLaplace { eps, .. }
            | Self::Krr { eps, .. }
            | Self::Rappor { eps, .. } => eps,
            Self::BoundedRange { eta } => eta,
        }
    }

    /// Same mechanism shape with a different privacy parameter.
    pub fn with_privacy_parameter(&self, value: f64) -> Result<Self> {
        let m = match *self {
            Self::GenericDp { .. } => Self::GenericDp { eps: value },
            Self::Laplace { .. } => Self::Laplace { eps: value },
            Self::DiscreteLaplace { delta, .. } => Self::DiscreteLaplace { eps: value, delta },
            Self::Krr { k, .. } => Self::Krr { eps: value, k },
            Self::Rappor { d, .. } => Self::Rappor { eps: value, d },
            Self::BoundedRange { .. } => Self::BoundedRange { eta: value },
        };
        m.validated()
    }

    /// Upper bound on every Rényi divergence of the mechanism: an `eps`-DP
    /// (or `eta`-BR) mechanism has `D_alpha <= eps` for every order.
    pub fn divergence_cap(&self) -> f64 {
        self.privacy_parameter()
    }
}

impl fmt::Display for Mechanism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::GenericDp { eps } => write!(f, "generic eps={eps}"),
            Self::Laplace { eps } => write!(f, "laplace eps={eps}"),
            Self::DiscreteLaplace { eps, delta } => write!(f, "dlaplace eps={eps} delta={delta}"),
            Self::Krr { eps, k } => write!(f, "krr eps={eps} k={k}"),
            Self::Rappor { eps, d } => write!(f, "rappor eps={eps} d={d}"),
            Self::BoundedRange { eta } => write!(f, "br eta={eta}"),
        }
    }
}

/// A Rényi order `alpha >= 1`.
///
/// The order is stored as its excess `alpha - 1`, so orders such as
/// `1 + 1e-12` are represented exactly. An excess of zero is the KL limit
/// `alpha -> 1`, never an approximation of it.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct RenyiOrder {
    excess: f64,
}

impl RenyiOrder {
    /// The `alpha -> 1` limit (KL divergence).
    pub const KL: RenyiOrder = RenyiOrder { excess: 0.0 };

    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha < 1.0 {
            return Err(domain(format!(
                "Renyi order must be finite and >= 1, got {alpha}"
            )));
        }
        Ok(Self {
            excess: alpha - 1.0,
        })
    }

    /// Builds the order `1 + excess`.
    pub fn from_excess(excess: f64) -> Result<Self> {
        if !excess.is_finite() || excess < 0.0 {
            return Err(domain(format!(
                "order excess must be finite and >= 0, got {excess}"
            )));
        }
        Ok(Self { excess })
    }

    /// For excesses already known to be finite and non-negative.
    pub(crate) fn excess_unchecked(excess: f64) -> Self {
        debug_assert!(excess.is_finite() && excess >= 0.0);
        Self { excess }
    }

    pub fn alpha(&self) -> f64 {
        1.0 + self.excess
    }

    /// `alpha - 1`.
    pub fn excess(&self) -> f64 {
        self.excess
    }

    pub fn is_kl(&self) -> bool {
        self.excess == 0.0
    }
}

impl fmt::Display for RenyiOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_kl() {
            write!(f, "1 (KL)")
        } else {
            write!(f, "{}", self.alpha())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_enforce_invariants() {
        assert!(Mechanism::laplace(0.0).is_err());
        assert!(Mechanism::laplace(-1.0).is_err());
        assert!(Mechanism::laplace(f64::NAN).is_err());
        assert!(Mechanism::discrete_laplace(1.0, 0).is_err());
        assert!(Mechanism::krr(1.0, 1).is_err());
        assert!(Mechanism::rappor(1.0, 1).is_err());
        assert!(Mechanism::bounded_range(0.0).is_err());
        assert!(Mechanism::krr(1.0, 2).is_ok());
    }

    #[test]
    fn orders() {
        assert!(RenyiOrder::new(0.5).is_err());
        assert!(RenyiOrder::new(f64::INFINITY).is_err());
        assert!(RenyiOrder::new(1.0).unwrap().is_kl());
        let o = RenyiOrder::from_excess(1e-12).unwrap();
        assert_eq!(o.excess(), 1e-12);
        assert!(!o.is_kl());
        assert_eq!(RenyiOrder::new(3.0).unwrap().excess(), 2.0);
    }

    #[test]
    fn mechanism_json_shape() {
        let m = Mechanism::krr(1.0, 4).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"kind":"krr","eps":1.0,"k":4}"#);
        let back: Mechanism = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }
}
