//! Closed-form tight RDP curves `alpha -> D_alpha(P || Q)` for each mechanism.
//!
//! Each curve has the shape `log(S(alpha)) / (alpha - 1)` with `S(1) = 1`, so
//! evaluating it naively near `alpha = 1` divides a cancelled logarithm by a
//! tiny number. Every curve here therefore has two routes:
//!
//! * an *excess route* that computes `T = S(alpha) - 1` directly as a sum of
//!   non-negative terms (or terms whose cancellation is bounded), and returns
//!   `log1p(T) / (alpha - 1)`. This stays accurate as `alpha -> 1`.
//! * a *log-space route* for large `(alpha - 1) * eps`, where `S` would
//!   overflow and no cancellation is left to protect against.
//!
//! The KL limit `alpha = 1` is always a separate analytic branch.

use crate::error::{domain, require_positive, Result};
use crate::mechanism::{Mechanism, RenyiOrder};
use crate::special::{
    cosh_minus_one_twice, expm1_minus_x, log_expm1, log_sinhc_unchecked, log_tanh_half, lse,
    sinhc_minus_one_unchecked,
};

/// The excess route is used while `(alpha - 1) * (largest |log-ratio|)` stays below this.
const EXCESS_ROUTE_LIMIT: f64 = 50.0;
/// Shift sizes up to this use the exact pairwise sum on the excess route.
const DLAP_PAIRWISE_LIMIT: u64 = 4_000_000;

/// Binary randomized response, the worst case over all `eps`-DP mechanisms.
pub fn rdp_generic_dp(eps: f64, order: RenyiOrder) -> Result<f64> {
    require_positive("eps", eps)?;
    Ok(krr_curve(eps, 2.0, order.excess()))
}

/// Laplace noise with sensitivity 1 and scale `1/eps`.
pub fn rdp_laplace(eps: f64, order: RenyiOrder) -> Result<f64> {
    require_positive("eps", eps)?;
    Ok(laplace_curve(eps, order.excess()))
}

/// `D_alpha(Z + d || Z)` for `Z ~ DLap(a)`, mass proportional to `e^{-a|x|}`.
///
/// Symmetric in the sense that `D_alpha(Z || Z + d)` has the same value.
pub fn rdp_discrete_laplace_shift(a: f64, d: i64, order: RenyiOrder) -> Result<f64> {
    require_positive("a", a)?;
    if d < 0 {
        return Err(domain(format!("shift d must be >= 0, got {d}")));
    }
    Ok(dlap_shift_curve(a, d as u64, order.excess()))
}

/// Discrete Laplace mechanism with sensitivity `delta`: the worst shift is `delta`.
pub fn rdp_discrete_laplace(eps: f64, delta: u64, order: RenyiOrder) -> Result<f64> {
    require_positive("eps", eps)?;
    if delta < 1 {
        return Err(domain("sensitivity delta must be >= 1"));
    }
    Ok(dlap_shift_curve(eps / delta as f64, delta, order.excess()))
}

/// `k`-ary randomized response.
pub fn rdp_krr(eps: f64, k: u64, order: RenyiOrder) -> Result<f64> {
    require_positive("eps", eps)?;
    if k < 2 {
        return Err(domain(format!("k-RR needs k >= 2, got {k}")));
    }
    Ok(krr_curve(eps, k as f64, order.excess()))
}

/// Basic RAPPOR. Only the two coordinates where the one-hot encodings differ
/// contribute, so the curve is twice that of `eps/2`-DP binary RR and does
/// not depend on the dimension.
pub fn rdp_rappor(eps: f64, order: RenyiOrder) -> Result<f64> {
    require_positive("eps", eps)?;
    Ok(2.0 * krr_curve(0.5 * eps, 2.0, order.excess()))
}

/// Worst-case divergence over pairs whose log-ratios lie in `[-t, eta - t]`.
pub fn rdp_br_at_t(eta: f64, t: f64, order: RenyiOrder) -> Result<f64> {
    require_positive("eta", eta)?;
    if !(0.0..=eta).contains(&t) {
        return Err(domain(format!(
            "t must lie in [0, eta] = [0, {eta}], got {t}"
        )));
    }
    Ok(br_at_t_curve(eta, t, order.excess()))
}

/// Worst case over all `eta`-bounded-range mechanisms: `rdp_br_at_t` maximised over `t`.
pub fn rdp_br(eta: f64, order: RenyiOrder) -> Result<f64> {
    require_positive("eta", eta)?;
    Ok(br_curve(eta, order.excess()))
}

/// The maximising offset `t` for [`rdp_br_at_t`].
///
/// For `alpha > 1` this is the unique interior stationary point; at the KL
/// limit it is `eta - log((e^eta - 1)/eta)`.
pub fn br_optimal_t(eta: f64, order: RenyiOrder) -> Result<f64> {
    require_positive("eta", eta)?;
    Ok(br_optimal_t_unchecked(eta, order.excess()))
}

/// The bounded-range curve written as a single logarithm (no `t` substitution).
/// Evaluated entirely in log-space; intended for `alpha` well away from 1.
pub fn rdp_br_closed_form(eta: f64, alpha: f64) -> Result<f64> {
    require_positive("eta", eta)?;
    if !(alpha.is_finite() && alpha > 1.0) {
        return Err(domain(format!("closed form needs alpha > 1, got {alpha}")));
    }
    Ok(br_closed_form_unchecked(eta, alpha - 1.0))
}

/// An evaluable RDP curve for one mechanism.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RdpCurve {
    mechanism: Mechanism,
}

impl RdpCurve {
    pub fn new(mechanism: Mechanism) -> Result<Self> {
        Ok(Self {
            mechanism: mechanism.validated()?,
        })
    }

    pub fn mechanism(&self) -> &Mechanism {
        &self.mechanism
    }

    /// `eps_hat(alpha)`.
    pub fn eval(&self, order: RenyiOrder) -> f64 {
        let h = order.excess();
        match self.mechanism {
            Mechanism::GenericDp { eps } => krr_curve(eps, 2.0, h),
            Mechanism::Laplace { eps } => laplace_curve(eps, h),
            Mechanism::DiscreteLaplace { eps, delta } => {
                dlap_shift_curve(eps / delta as f64, delta, h)
            }
            Mechanism::Krr { eps, k } => krr_curve(eps, k as f64, h),
            Mechanism::Rappor { eps, .. } => 2.0 * krr_curve(0.5 * eps, 2.0, h),
            Mechanism::BoundedRange { eta } => br_curve(eta, h),
        }
    }

    /// `eps_hat` at a plain `alpha >= 1`.
    pub fn eval_alpha(&self, alpha: f64) -> Result<f64> {
        Ok(self.eval(RenyiOrder::new(alpha)?))
    }

    /// The KL limit `eps_hat(1)`.
    pub fn kl(&self) -> f64 {
        self.eval(RenyiOrder::KL)
    }

    /// Pure-DP cap: `eps_hat(alpha) <= cap` for every order.
    pub fn cap(&self) -> f64 {
        self.mechanism.divergence_cap()
    }
}

fn finish(t: f64, h: f64, cap: f64) -> f64 {
    (t.ln_1p() / h).clamp(0.0, cap)
}

/// k-RR (k = 2 is binary RR). `k` is passed as a float; it is an integer >= 2.
pub(crate) fn krr_curve(eps: f64, k: f64, h: f64) -> f64 {
    if h == 0.0 {
        // eps (e^eps - 1) / (e^eps - 1 + k)
        return eps / (1.0 + k / eps.exp_m1());
    }
    let alpha = 1.0 + h;
    if h * eps <= EXCESS_ROUTE_LIMIT && eps <= 300.0 {
        // S - 1 = [(e^eps - 1)(e^{h eps} - 1) + 4 sinh^2(h eps / 2)] / (e^eps + k - 1)
        let num = eps.exp_m1() * (h * eps).exp_m1() + cosh_minus_one_twice(h * eps);
        let den = eps.exp() + k - 1.0;
        finish(num / den, h, eps)
    } else {
        let mut top = vec![alpha * eps, -h * eps];
        if k > 2.0 {
            top.push((k - 2.0).ln());
        }
        let log_s = lse(&top) - lse(&[eps, (k - 1.0).ln()]);
        (log_s / h).clamp(0.0, eps)
    }
}

pub(crate) fn laplace_curve(eps: f64, h: f64) -> f64 {
    if h == 0.0 {
        // eps + e^{-eps} - 1
        return expm1_minus_x(-eps);
    }
    let alpha = 1.0 + h;
    if h * eps <= EXCESS_ROUTE_LIMIT {
        // S - 1 = [alpha (e^{h eps} - 1 - h eps) + h (e^{-alpha eps} - 1 + alpha eps)] / (2 alpha - 1)
        let num = alpha * expm1_minus_x(h * eps) + h * expm1_minus_x(-alpha * eps);
        finish(num / (alpha + h), h, eps)
    } else {
        let log_den = (alpha + h).ln();
        let log_s = lse(&[
            alpha.ln() - log_den + h * eps,
            h.ln() - log_den - alpha * eps,
        ]);
        (log_s / h).clamp(0.0, eps)
    }
}

/// `1 / sinhc(a) = a / sinh(a)` without overflow.
fn inv_sinhc(a: f64) -> f64 {
    if a < 1.0 {
        1.0 / (1.0 + sinhc_minus_one_unchecked(a))
    } else {
        2.0 * a * (-a).exp() / (-(-2.0 * a).exp_m1())
    }
}

/// KL divergence `D_1(Z + d || Z)` for `Z ~ DLap(a)`:
/// `a d - (1 - e^{-a d}) a / sinh(a)`.
pub(crate) fn dlap_shift_kl(a: f64, d: f64) -> f64 {
    let ad = a * d;
    if a <= 500.0 {
        // [a d (sinhc(a) - 1) + (e^{-a d} - 1 + a d)] / sinhc(a), all terms >= 0
        (ad * sinhc_minus_one_unchecked(a) + expm1_minus_x(-ad)) * inv_sinhc(a)
    } else {
        ad - (-(-ad).exp_m1()) * inv_sinhc(a)
    }
}

pub(crate) fn dlap_shift_curve(a: f64, d: u64, h: f64) -> f64 {
    if d == 0 {
        return 0.0;
    }
    let df = d as f64;
    let cap = a * df;
    if h == 0.0 {
        return dlap_shift_kl(a, df).clamp(0.0, cap);
    }
    let alpha = 1.0 + h;
    if h * cap <= EXCESS_ROUTE_LIMIT && d <= DLAP_PAIRWISE_LIMIT {
        // Under P = Z + d the log-ratio is -a d on x <= 0, +a d on x >= d and
        // a (2x - d) in between. Pairing x with d - x makes every term of
        // E_P[e^{h L} - 1] non-negative.
        let q = (-a).exp();
        let norm = (0.5 * a).tanh();
        let s_outer = h * cap;
        let outer = ((-(-cap).exp_m1()) * s_outer.exp_m1()
            + (-cap).exp() * cosh_minus_one_twice(s_outer))
            / (1.0 + q);
        let mut middle = 0.0;
        for x in (d / 2 + 1)..d {
            let m = (2 * x - d) as f64;
            let s = h * a * m;
            let p_hi = norm * (-a * (d - x) as f64).exp();
            let p_lo = norm * (-a * x as f64).exp();
            let gap = p_hi * (-(-a * m).exp_m1());
            middle += gap * s.exp_m1() + p_lo * cosh_minus_one_twice(s);
        }
        finish(outer + middle, h, cap)
    } else {
        // tanh(a/2) [ e^{-a alpha d}/(e^a - 1) + sum_{x=0}^{d} e^{a((2 alpha - 1) x - alpha d)}
        //            + e^{a h d}/(e^a - 1) ]
        let log_em1_a = log_expm1(a);
        let log_left = -a * alpha * df - log_em1_a;
        let log_right = a * h * df - log_em1_a;
        let c = a * (2.0 * alpha - 1.0);
        let log_middle = a * h * df + (-(-c * (df + 1.0)).exp_m1()).ln() - (-(-c).exp_m1()).ln();
        let log_s = log_tanh_half(a) + lse(&[log_left, log_middle, log_right]);
        (log_s / h).clamp(0.0, cap)
    }
}

/// Two-point pair from the bounded-range construction:
/// `P = (p0, p1)`, `Q = (q0, q1)` with `log(P/Q) = (-t, eta - t)`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct BrTwoPoint {
    pub p: [f64; 2],
    pub q: [f64; 2],
}

pub(crate) fn br_two_point(eta: f64, t: f64) -> BrTwoPoint {
    if t <= 0.0 {
        return BrTwoPoint {
            p: [1.0, 0.0],
            q: [1.0, 0.0],
        };
    }
    if t >= eta {
        return BrTwoPoint {
            p: [0.0, 1.0],
            q: [0.0, 1.0],
        };
    }
    let log_em1_eta = log_expm1(eta);
    // q1 = (e^t - 1)/(e^eta - 1), q0 = (e^eta - e^t)/(e^eta - 1)
    let q1 = (log_expm1(t) - log_em1_eta).exp();
    let q0 = (t + log_expm1(eta - t) - log_em1_eta).exp();
    // p0 = q0 e^{-t}, p1 = q1 e^{eta - t} = (1 - e^{-t})/(1 - e^{-eta})
    let p0 = (log_expm1(eta - t) - log_em1_eta).exp();
    let p1 = (-t).exp_m1() / (-eta).exp_m1();
    BrTwoPoint {
        p: [p0, p1],
        q: [q0, q1],
    }
}

pub(crate) fn br_at_t_curve(eta: f64, t: f64, h: f64) -> f64 {
    if t <= 0.0 || t >= eta {
        return 0.0;
    }
    let pair = br_two_point(eta, t);
    let [p0, p1] = pair.p;
    let kl = p0 * (-t) + p1 * (eta - t);
    if h == 0.0 {
        return kl.clamp(0.0, eta);
    }
    let alpha = 1.0 + h;
    if h * eta <= EXCESS_ROUTE_LIMIT {
        // S - 1 = E_P[e^{h L} - 1] = h KL + E_P[e^{h L} - 1 - h L]
        let t_excess = h * kl + p0 * expm1_minus_x(-h * t) + p1 * expm1_minus_x(h * (eta - t));
        finish(t_excess, h, eta)
    } else {
        let log_em1_eta = log_expm1(eta);
        let log_q0 = t + log_expm1(eta - t) - log_em1_eta;
        let log_q1 = log_expm1(t) - log_em1_eta;
        let log_s = lse(&[log_q0 - t * alpha, log_q1 + (eta - t) * alpha]);
        (log_s / h).clamp(0.0, eta)
    }
}

pub(crate) fn br_optimal_t_unchecked(eta: f64, h: f64) -> f64 {
    let t = if h == 0.0 {
        eta - log_expm1(eta) + eta.ln()
    } else {
        let alpha = 1.0 + h;
        // log(alpha (e^{alpha eta} - e^eta) / ((alpha - 1)(e^{alpha eta} - 1)))
        alpha.ln() + eta + log_expm1(h * eta) - h.ln() - log_expm1(alpha * eta)
    };
    t.clamp(0.0, eta)
}

/// KL limit of the bounded-range curve, `eta/(e^eta - 1) + log((e^eta - 1)/eta) - 1`.
pub(crate) fn br_kl(eta: f64) -> f64 {
    if eta <= 2.0 {
        // With u = eta/2 and s = sinhc(u): (e^eta - 1)/eta = e^u s, and the
        // expression becomes [(e^{-u} - 1 + u) - (s - 1) + u (s - 1)] / s + log s.
        let u = 0.5 * eta;
        let sm1 = sinhc_minus_one_unchecked(u);
        (expm1_minus_x(-u) - sm1 + u * sm1) / (1.0 + sm1) + log_sinhc_unchecked(u)
    } else {
        eta * (-eta).exp() / (-(-eta).exp_m1()) + log_expm1(eta) - eta.ln() - 1.0
    }
}

fn br_closed_form_unchecked(eta: f64, h: f64) -> f64 {
    let alpha = 1.0 + h;
    // log[(e^{alpha eta} - 1)^alpha (alpha (e^{alpha eta} - e^eta) / (alpha - 1))^{1 - alpha}
    //     / (alpha (e^eta - 1))] / (alpha - 1)
    let log_inner = alpha.ln() + eta + log_expm1(h * eta) - h.ln();
    let log_s = alpha * log_expm1(alpha * eta) - h * log_inner - alpha.ln() - log_expm1(eta);
    (log_s / h).clamp(0.0, eta)
}

pub(crate) fn br_curve(eta: f64, h: f64) -> f64 {
    if h == 0.0 {
        return br_kl(eta).clamp(0.0, eta);
    }
    if h * eta <= EXCESS_ROUTE_LIMIT {
        br_at_t_curve(eta, br_optimal_t_unchecked(eta, h), h)
    } else {
        br_closed_form_unchecked(eta, h)
    }
}
