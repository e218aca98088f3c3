//! zCDP constants `rho` for each mechanism.
//!
//! A mechanism is `rho`-zCDP when `eps_hat(alpha) <= rho * alpha` for every
//! order. For every mechanism here except large-`k` randomized response, the
//! smallest such `rho` is the KL limit `eps_hat(1)`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, require_positive, Result};
use crate::mechanism::Mechanism;
use crate::rdp::{br_kl, dlap_shift_kl, krr_curve, laplace_curve, RdpCurve};
use crate::special::expm1_minus_x;
use crate::verify::sup_rdp_over_alpha;

/// A zCDP constant together with where it comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZcdpBound {
    pub rho: f64,
    /// `true` when no smaller `rho` is valid for this mechanism (or, for
    /// bounded range, for the whole class).
    pub tight: bool,
    /// Label of the result the constant is taken from.
    pub source: String,
    pub mechanism: Mechanism,
}

pub const SOURCE_GENERIC: &str = "prop:dp-to-zcdp";
pub const SOURCE_LAPLACE: &str = "thm:zcdp-lap";
pub const SOURCE_DISCRETE_LAPLACE: &str = "thm:zcdp";
pub const SOURCE_KRR_TIGHT: &str = "thm:zcdp-rr-tight";
pub const SOURCE_KRR_GENERAL: &str = "cor:krr-general";
pub const SOURCE_RAPPOR: &str = "prop:zcdp-rappor";
pub const SOURCE_BR: &str = "thm:br-cdp";

/// Largest `k` for which randomized response is known to be tight at `alpha -> 1`.
pub const KRR_TIGHT_MAX_K: u64 = 6;

/// Which form of the large-`k` randomized-response bound to evaluate.
///
/// The two forms differ only in the argument of the logarithm:
/// `sqrt(k - 1 + e^eps) / eps` versus `eps * sqrt(k - 1 + e^eps)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LooseKrrVariant {
    /// `log(sqrt(k - 1 + e^eps) / eps)`.
    InverseEps,
    /// `log(eps * sqrt(k - 1 + e^eps))`.
    TimesEps,
}

impl LooseKrrVariant {
    pub const ALL: [LooseKrrVariant; 2] = [LooseKrrVariant::InverseEps, LooseKrrVariant::TimesEps];

    pub fn source_label(&self) -> &'static str {
        match self {
            Self::InverseEps => "thm:rr-loose-large-k[log(sqrt(k-1+e^eps)/eps)]",
            Self::TimesEps => "thm:rr-loose-large-k[log(eps*sqrt(k-1+e^eps))]",
        }
    }
}

fn bound(rho: f64, tight: bool, source: &str, mechanism: Mechanism) -> ZcdpBound {
    ZcdpBound {
        rho,
        tight,
        source: source.to_string(),
        mechanism,
    }
}

/// `eps * tanh(eps / 2)`: the worst case over all `eps`-DP mechanisms.
pub fn zcdp_generic(eps: f64) -> Result<ZcdpBound> {
    let m = Mechanism::generic_dp(eps)?;
    Ok(bound(eps * (0.5 * eps).tanh(), true, SOURCE_GENERIC, m))
}

/// `eps + e^{-eps} - 1`.
pub fn zcdp_laplace(eps: f64) -> Result<ZcdpBound> {
    let m = Mechanism::laplace(eps)?;
    Ok(bound(laplace_curve(eps, 0.0), true, SOURCE_LAPLACE, m))
}

/// `eps (1 - (1 - e^{-eps}) csch(eps / delta) / delta)`.
pub fn zcdp_discrete_laplace(eps: f64, delta: u64) -> Result<ZcdpBound> {
    let m = Mechanism::discrete_laplace(eps, delta)?;
    let rho = dlap_shift_kl(eps / delta as f64, delta as f64);
    Ok(bound(rho, true, SOURCE_DISCRETE_LAPLACE, m))
}

/// `eps (e^eps - 1) / (e^eps - 1 + k)` for `k <= 6`; otherwise the smallest
/// certified upper bound among the general bound and the large-`k` forms.
pub fn zcdp_krr(eps: f64, k: u64) -> Result<ZcdpBound> {
    let m = Mechanism::krr(eps, k)?;
    if k <= KRR_TIGHT_MAX_K {
        return Ok(bound(
            krr_curve(eps, k as f64, 0.0),
            true,
            SOURCE_KRR_TIGHT,
            m,
        ));
    }
    let mut best = bound(
        krr_curve(eps, KRR_TIGHT_MAX_K as f64, 0.0),
        false,
        SOURCE_KRR_GENERAL,
        m,
    );
    let curve = RdpCurve::new(m)?;
    let mut certified_sup = None;
    for variant in LooseKrrVariant::ALL {
        let Some(rho) = loose_large_k(eps, k, variant)? else {
            continue;
        };
        if rho >= best.rho {
            continue;
        }
        // Only adopt a form once the numerical supremum confirms it.
        let sup = *certified_sup
            .get_or_insert_with(|| sup_rdp_over_alpha(&curve, 1000.0, 1e-10).sup_value);
        if sup * (1.0 + 1e-9) <= rho {
            best = bound(rho, false, variant.source_label(), m);
        }
    }
    Ok(best)
}

/// The large-`k` randomized-response bound
/// `eps^2 max{1 / log(arg), 1 / sqrt(k - 1 + e^eps)}`, where `arg` depends on the
/// variant. `None` when `arg <= 1`, where the form gives no bound.
pub fn loose_large_k(eps: f64, k: u64, variant: LooseKrrVariant) -> Result<Option<f64>> {
    require_positive("eps", eps)?;
    if k < 2 {
        return Err(domain(format!("k-RR needs k >= 2, got {k}")));
    }
    // log(k - 1 + e^eps)
    let log_norm = crate::special::lse(&[eps, ((k - 1) as f64).ln()]);
    let log_arg = match variant {
        LooseKrrVariant::InverseEps => 0.5 * log_norm - eps.ln(),
        LooseKrrVariant::TimesEps => 0.5 * log_norm + eps.ln(),
    };
    if log_arg <= 0.0 {
        return Ok(None);
    }
    let inv = (1.0 / log_arg).max((-0.5 * log_norm).exp());
    Ok(Some(eps * eps * inv))
}

/// The `k`-RR threshold `k*(eps)`: for `k > k*(eps)` the zCDP constant is no
/// longer attained as `alpha -> 1`. Always at least 6, with `k*(0+) = 6`.
pub fn krr_threshold(eps: f64) -> Result<f64> {
    require_positive("eps", eps)?;
    let value = if eps < 0.5 {
        // eps(e^eps + 1) - 2e^eps + 2 = eps^2 sum_{i>=1} eps^i / i! * i / ((i+1)(i+2))
        let mut pow_over_fact = 1.0;
        let mut sum = 0.0;
        let mut i = 1.0;
        loop {
            pow_over_fact *= eps / i;
            let term = pow_over_fact * i / ((i + 1.0) * (i + 2.0));
            sum += term;
            if term < 1e-20 * sum {
                break;
            }
            i += 1.0;
        }
        2.0 * eps.exp_m1() * expm1_minus_x(eps) / (eps * eps * sum)
    } else {
        // numerator and denominator divided by e^eps
        let num = 2.0 * (-(-eps).exp_m1()) * expm1_minus_x(eps);
        let den = (eps - 2.0) + (eps + 2.0) * (-eps).exp();
        num / den
    };
    Ok(if value.is_finite() { value } else { f64::MAX })
}

/// `eps * tanh(eps / 4)`.
pub fn zcdp_rappor(eps: f64) -> Result<ZcdpBound> {
    // RAPPOR's dimension does not enter the bound.
    zcdp_rappor_dim(eps, 2)
}

pub fn zcdp_rappor_dim(eps: f64, d: u64) -> Result<ZcdpBound> {
    let m = Mechanism::rappor(eps, d)?;
    Ok(bound(eps * (0.25 * eps).tanh(), true, SOURCE_RAPPOR, m))
}

/// `eta / (e^eta - 1) + log((e^eta - 1) / eta) - 1`, for the class of
/// `eta`-bounded-range mechanisms.
pub fn zcdp_br(eta: f64) -> Result<ZcdpBound> {
    let m = Mechanism::bounded_range(eta)?;
    Ok(bound(br_kl(eta), true, SOURCE_BR, m))
}

/// zCDP constant for any mechanism description.
pub fn zcdp_bound(mechanism: &Mechanism) -> Result<ZcdpBound> {
    match *mechanism {
        Mechanism::GenericDp { eps } => zcdp_generic(eps),
        Mechanism::Laplace { eps } => zcdp_laplace(eps),
        Mechanism::DiscreteLaplace { eps, delta } => zcdp_discrete_laplace(eps, delta),
        Mechanism::Krr { eps, k } => zcdp_krr(eps, k),
        Mechanism::Rappor { eps, d } => zcdp_rappor_dim(eps, d),
        Mechanism::BoundedRange { eta } => zcdp_br(eta),
    }
}

/// Standard `rho`-zCDP to `(eps, delta)`-DP conversion, `rho + 2 sqrt(rho log(1/delta))`.
///
/// Plumbing for downstream accounting; not one of the tight results above.
pub fn zcdp_to_approx_dp(rho: f64, delta: f64) -> Result<f64> {
    require_positive("rho", rho)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(domain(format!("delta must lie in (0, 1), got {delta}")));
    }
    Ok(rho + 2.0 * (rho * (-delta.ln())).sqrt())
}
