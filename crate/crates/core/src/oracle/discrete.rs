use super::{DiscreteDist, OracleResult};
use crate::error::{domain, require_positive, Error, Result};
use crate::mechanism::RenyiOrder;
use crate::special::{log_tanh_half, lse};

/// Above this value of `(alpha - 1) * max|log-ratio|` sums are taken in log-space.
const EXCESS_ROUTE_LIMIT: f64 = 50.0;

/// `D_alpha(P || Q)` as an exact finite sum.
///
/// Both inputs are renormalised analytically, so the result is the divergence
/// of `P / sum(P)` from `Q / sum(Q)`. Near `alpha = 1` the sum is formed as
/// `sum P (e^{(alpha-1) L} - 1)`, which keeps full relative accuracy.
pub fn renyi_discrete(
    p: &DiscreteDist,
    q: &DiscreteDist,
    order: RenyiOrder,
) -> Result<OracleResult> {
    let (plo, phi) = p.index_range();
    let (qlo, qhi) = q.index_range();
    let sp: f64 = p.masses().iter().sum();
    let sq: f64 = q.masses().iter().sum();
    let shift = (sp / sq).ln();

    // (normalised P mass, normalised log-ratio) for every outcome P charges
    let mut terms = Vec::with_capacity(p.len());
    let mut log_mags = Vec::with_capacity(p.len());
    for x in plo.min(qlo)..=phi.max(qhi) {
        let px = p.mass_at(x);
        if px == 0.0 {
            continue;
        }
        let qx = q.mass_at(x);
        if qx == 0.0 {
            return Err(Error::NotAbsolutelyContinuous { index: x, mass: px });
        }
        terms.push((px / sp, px.ln() - qx.ln() - shift));
        log_mags.push(px.ln().abs() + qx.ln().abs());
    }
    let n = terms.len() as f64;
    let h = order.excess();
    let eps = f64::EPSILON;

    if h == 0.0 {
        let (value, abs): (f64, f64) = terms
            .iter()
            .map(|&(w, l)| (w * l, (w * l).abs()))
            .fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
        return Ok(OracleResult {
            value,
            error_bound: 8.0 * (n + 2.0) * eps * abs,
        });
    }

    let lmax = terms.iter().map(|t| t.1.abs()).fold(0.0, f64::max);
    if h * lmax <= EXCESS_ROUTE_LIMIT {
        let mut t = 0.0;
        let mut abs = 0.0;
        // rounding in each log-ratio, carried through e^{hL}
        let mut ratio_err = 0.0;
        for (&(w, l), x) in terms.iter().zip(&log_mags) {
            let term = w * (h * l).exp_m1();
            t += term;
            abs += term.abs();
            ratio_err += w * (h * l).exp() * h * 4.0 * (x + shift.abs() + 1.0);
        }
        // Each term is exact up to a relative error, so the sum's error scales with `abs`.
        let err_t = eps * (8.0 * (n + 2.0) * abs + ratio_err);
        Ok(OracleResult {
            value: t.ln_1p() / h,
            error_bound: err_t / (h * (1.0 + t - err_t).max(f64::MIN_POSITIVE)),
        })
    } else {
        let exponents: Vec<f64> = terms.iter().map(|&(w, l)| w.ln() + h * l).collect();
        let log_s = lse(&exponents);
        let big = exponents.iter().map(|e| e.abs()).fold(0.0, f64::max);
        Ok(OracleResult {
            value: log_s / h,
            error_bound: 8.0 * eps * (n + 2.0 + big + log_s.abs()) / h,
        })
    }
}

/// `D_alpha(Z + d || Z)` for `Z` with mass proportional to `e^{-a|x|}` on the
/// integers, by direct summation over a window `[-N, d + N]`.
///
/// On both sides of the window the log-ratio is constant and the masses are
/// geometric, so the omitted tails are known exactly and enter the error bound.
/// `tol` bounds the tails' contribution to the reported divergence.
pub fn renyi_discrete_laplace(a: f64, d: i64, order: RenyiOrder, tol: f64) -> Result<OracleResult> {
    require_positive("a", a)?;
    require_positive("tol", tol)?;
    if d < 0 {
        return Err(domain(format!("shift d must be >= 0, got {d}")));
    }
    if d == 0 {
        return Ok(OracleResult {
            value: 0.0,
            error_bound: 0.0,
        });
    }
    let h = order.excess();
    let alpha = order.alpha();
    let df = d as f64;
    let log_norm = log_tanh_half(a);

    // The divergence divides tail mass by (alpha - 1); shrink the tolerance to match.
    let tail_tol = if h == 0.0 { tol } else { tol * h.min(1.0) };
    let n_tail = (((1.0 / tail_tol).ln() + a * alpha * df + log_norm.abs()) / a).ceil() + 8.0;
    if !(n_tail.is_finite() && n_tail < 5e7) {
        return Err(Error::Unsupported(format!(
            "discrete Laplace window of {n_tail} outcomes per side is too large"
        )));
    }
    let n_tail = n_tail as i64;
    let lo = -n_tail;
    let hi = d + n_tail;
    let count = (hi - lo + 1) as f64;
    let log_p = |x: i64| log_norm - a * (x - d).abs() as f64;
    let log_ratio = |x: i64| a * (x.abs() - (x - d).abs()) as f64;

    // P-mass beyond the window: q^{d+N+1}/(1+q) on the left, q^{N+1}/(1+q) on the right.
    let q = (-a).exp();
    let log_left = -a * (df + n_tail as f64 + 1.0) - q.ln_1p();
    let log_right = -a * (n_tail as f64 + 1.0) - q.ln_1p();
    let ad = a * df;
    let eps = f64::EPSILON;

    if h == 0.0 {
        let mut value = 0.0;
        let mut abs = 0.0;
        for x in lo..=hi {
            let term = log_p(x).exp() * log_ratio(x);
            value += term;
            abs += term.abs();
        }
        let tail = (log_left.exp() + log_right.exp()) * ad;
        return Ok(OracleResult {
            value,
            error_bound: tail
                + eps * abs * (8.0 * count + 4.0 * (log_norm.abs() + a * (n_tail as f64 + df))),
        });
    }

    if h * ad <= EXCESS_ROUTE_LIMIT {
        let mut t = 0.0;
        let mut abs = 0.0;
        for x in lo..=hi {
            let term = log_p(x).exp() * (h * log_ratio(x)).exp_m1();
            t += term;
            abs += term.abs();
        }
        let tail_t =
            log_left.exp() * (-h * ad).exp_m1().abs() + log_right.exp() * (h * ad).exp_m1();
        // Every term carries a relative error of order eps * (count + |log P|).
        let worst_log_p = log_norm.abs() + a * (n_tail as f64 + df);
        let err_t = tail_t + eps * abs * (8.0 * count + 4.0 * worst_log_p);
        Ok(OracleResult {
            value: t.ln_1p() / h,
            error_bound: err_t / (h * (1.0 + t - err_t).max(f64::MIN_POSITIVE)),
        })
    } else {
        let exponents: Vec<f64> = (lo..=hi).map(|x| log_p(x) + h * log_ratio(x)).collect();
        let log_s = lse(&exponents);
        let tail_rel = (log_left - h * ad - log_s).exp() + (log_right + h * ad - log_s).exp();
        let big = exponents.iter().map(|e| e.abs()).fold(0.0, f64::max);
        Ok(OracleResult {
            value: log_s / h,
            error_bound: (2.0 * tail_rel + 8.0 * eps * (count + big + log_s.abs())) / h,
        })
    }
}
