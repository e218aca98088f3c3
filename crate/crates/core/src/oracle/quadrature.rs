use super::{ContinuousDensityPair, OracleResult};
use crate::error::{require_positive, Error, Result};
use crate::mechanism::RenyiOrder;

const EXCESS_ROUTE_LIMIT: f64 = 50.0;
const MAX_DEPTH: u32 = 30;
const INITIAL_PANELS: usize = 16;

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Returns the integral and the summed Richardson error estimate.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    if b <= a {
        return (0.0, 0.0);
    }
    let width = (b - a) / INITIAL_PANELS as f64;
    let panel_tol = tol / INITIAL_PANELS as f64;
    let mut total = 0.0;
    let mut err = 0.0;
    for i in 0..INITIAL_PANELS {
        let lo = a + width * i as f64;
        let hi = if i + 1 == INITIAL_PANELS {
            b
        } else {
            lo + width
        };
        let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
        let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        let (v, e) = simpson_step(f, lo, hi, fa, fm, fb, whole, panel_tol, MAX_DEPTH);
        total += v;
        err += e;
    }
    (total, err)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> (f64, f64) {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    // Below the rounding noise of the panel sums further splitting cannot help.
    let noise = 64.0 * f64::EPSILON * (left.abs() + right.abs());
    if depth == 0 || delta.abs() <= (15.0 * tol).max(noise) || lm <= a || rm >= b {
        return (left + right + delta / 15.0, delta.abs() / 15.0);
    }
    let (vl, el) = simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1);
    let (vr, er) = simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    (vl + vr, el + er)
}

#[derive(Clone, Copy, PartialEq)]
enum Route {
    Kl,
    Excess,
    Log,
}

/// Outward slopes of the two log-densities beyond `edge`, checked to be affine.
fn tail_slopes(pair: &ContinuousDensityPair, edge: f64, dir: f64) -> Result<(f64, f64)> {
    let slope = |g: &dyn Fn(f64) -> f64, x: f64| g(x + dir) - g(x);
    let mut out = [0.0; 2];
    for (i, g) in [&pair.log_p, &pair.log_q].into_iter().enumerate() {
        let s1 = slope(g.as_ref(), edge);
        let s2 = slope(g.as_ref(), edge + 7.0 * dir);
        if !(s1.is_finite() && (s1 - s2).abs() <= 1e-9 * s1.abs().max(1.0)) {
            return Err(Error::Unsupported(
                "log-densities must be affine beyond the outermost singular points".into(),
            ));
        }
        out[i] = s1;
    }
    Ok((out[0], out[1]))
}

/// `D_alpha(P || Q)` for densities on the real line, by adaptive Simpson
/// quadrature split at the singular points plus exponential tails.
///
/// `tol` is the target absolute error on the divergence. The tails beyond the
/// integration window are bounded analytically and added to the error bound.
pub fn renyi_continuous(
    pair: &ContinuousDensityPair,
    order: RenyiOrder,
    tol: f64,
) -> Result<OracleResult> {
    require_positive("tol", tol)?;
    let h = order.excess();
    let alpha = order.alpha();
    let sing = pair.singular_points();
    let (s_min, s_max) = (sing[0], sing[sing.len() - 1]);
    let lp = |x: f64| (pair.log_p)(x);
    let lr = |x: f64| (pair.log_p)(x) - (pair.log_q)(x);

    let right = tail_slopes(pair, s_max, 1.0)?;
    let left = tail_slopes(pair, s_min, -1.0)?;
    for (sp, _) in [right, left] {
        if sp >= 0.0 {
            return Err(Error::Numerical("P does not decay in its tails".into()));
        }
    }

    let route = if h == 0.0 {
        Route::Kl
    } else {
        let unbounded = [right, left]
            .iter()
            .any(|&(sp, sq)| (sp - sq).abs() > 1e-12);
        let mut lmax: f64 = sing.iter().map(|&s| lr(s).abs()).fold(0.0, f64::max);
        for w in sing.windows(2) {
            for j in 1..64 {
                lmax = lmax.max(lr(w[0] + (w[1] - w[0]) * j as f64 / 64.0).abs());
            }
        }
        if !unbounded && h * lmax <= EXCESS_ROUTE_LIMIT {
            Route::Excess
        } else {
            Route::Log
        }
    };

    let shift = if route == Route::Log {
        sing.iter()
            .map(|&s| alpha * lp(s) - h * (pair.log_q)(s))
            .fold(f64::NEG_INFINITY, f64::max)
    } else {
        0.0
    };
    let integrand = |x: f64| -> f64 {
        let p = lp(x);
        match route {
            Route::Kl => p.exp() * lr(x),
            Route::Excess => p.exp() * (h * lr(x)).exp_m1(),
            Route::Log => (alpha * p - h * (pair.log_q)(x) - shift).exp(),
        }
    };

    // Magnitude bound on the integrand's mass beyond `edge`, outward slopes given.
    let tail = |edge: f64, (sp, sq): (f64, f64)| -> Result<f64> {
        let p0 = lp(edge);
        let l0 = lr(edge);
        let sl = sp - sq;
        Ok(match route {
            Route::Kl => p0.exp() * (l0.abs() / -sp + sl.abs() / (sp * sp)),
            Route::Excess => {
                let s = sp + h * sl;
                if s >= 0.0 {
                    return Err(Error::Numerical("integrand is not integrable".into()));
                }
                p0.exp() * ((h * l0).exp() / -s + 1.0 / -sp)
            }
            Route::Log => {
                let s = alpha * sp - h * sq;
                if s >= 0.0 {
                    return Err(Error::Numerical("integrand is not integrable".into()));
                }
                (alpha * p0 - h * (pair.log_q)(edge) - shift).exp() / -s
            }
        })
    };

    let scale = match route {
        Route::Kl => 1.0,
        Route::Excess => h,
        Route::Log => {
            let (coarse, _) = adaptive_simpson(&integrand, s_min - 1.0, s_max + 1.0, f64::INFINITY);
            0.5 * h * coarse
        }
    };
    let target = tol * scale;

    let mut width = 1.0;
    let (lo, hi, tail_mass) = loop {
        let (lo, hi) = (s_min - width, s_max + width);
        let t = tail(hi, right)? + tail(lo, left)?;
        if t <= 0.1 * target {
            break (lo, hi, t);
        }
        width *= 2.0;
        if width > 1e12 {
            return Err(Error::Numerical(
                "tails do not decay to the requested tolerance".into(),
            ));
        }
    };

    let mut edges = vec![lo];
    edges.extend_from_slice(sing);
    edges.push(hi);
    let pieces = (edges.len() - 1) as f64;
    let mut integral = 0.0;
    let mut quad_err = 0.0;
    for w in edges.windows(2) {
        let (v, e) = adaptive_simpson(&integrand, w[0], w[1], 0.5 * target / pieces);
        integral += v;
        quad_err += e;
    }
    let err = quad_err + tail_mass;
    let rounding = 64.0 * f64::EPSILON;

    let (value, error_bound) = match route {
        Route::Kl => (integral, err + rounding * integral.abs()),
        Route::Excess => {
            let v = integral.ln_1p() / h;
            let denom = h * (1.0 + integral - err).max(f64::MIN_POSITIVE);
            (v, err / denom + rounding * v.abs())
        }
        Route::Log => {
            if integral <= 0.0 {
                return Err(Error::Numerical("quadrature underflowed".into()));
            }
            let v = (integral.ln() + shift) / h;
            let rel = err / (integral - err).max(f64::MIN_POSITIVE);
            (v, rel / h + rounding * (v.abs() + shift.abs() / h))
        }
    };
    Ok(OracleResult { value, error_bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplace_pair(eps: f64, shift: f64) -> ContinuousDensityPair {
        let c = (0.5 * eps).ln();
        ContinuousDensityPair::new(
            Box::new(move |x: f64| c - eps * (x - shift).abs()),
            Box::new(move |x: f64| c - eps * x.abs()),
            vec![0.0, shift],
        )
        .unwrap()
    }

    #[test]
    fn simpson_integrates_exponential() {
        let (v, e) = adaptive_simpson(&|x: f64| (-x).exp(), 0.0, 5.0, 1e-12);
        assert!((v - (1.0 - (-5f64).exp())).abs() < 1e-12);
        assert!(e < 1e-11);
    }

    #[test]
    fn identical_densities() {
        let pair = laplace_pair(1.0, 0.0);
        for &a in &[1.0, 2.0, 40.0] {
            let r = renyi_continuous(&pair, RenyiOrder::new(a).unwrap(), 1e-10).unwrap();
            assert!(r.value.abs() <= r.error_bound.max(1e-12));
        }
    }

    #[test]
    fn shifted_laplace_order_two() {
        // D_2 = log(2/3 e^eps + 1/3 e^{-2 eps}) at eps = 1, integrating piecewise by hand
        let pair = laplace_pair(1.0, 1.0);
        let r = renyi_continuous(&pair, RenyiOrder::new(2.0).unwrap(), 1e-12).unwrap();
        let e = 1f64.exp();
        let expected = ((2.0 * e + 1.0 / (e * e)) / 3.0).ln();
        assert!(
            (r.value - expected).abs() < 1e-9,
            "{} vs {expected}",
            r.value
        );
        assert!(r.error_bound < 1e-9);
    }

    #[test]
    fn shifted_laplace_kl() {
        let pair = laplace_pair(1.0, 1.0);
        let r = renyi_continuous(&pair, RenyiOrder::KL, 1e-12).unwrap();
        assert!((r.value - (-1f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn tolerance_halving_stays_within_bound() {
        let pair = laplace_pair(0.5, 1.0);
        for &a in &[1.0, 1.0 + 1e-6, 3.0, 200.0] {
            let o = RenyiOrder::new(a).unwrap();
            let coarse = renyi_continuous(&pair, o, 1e-6).unwrap();
            let fine = renyi_continuous(&pair, o, 5e-7).unwrap();
            assert!((coarse.value - fine.value).abs() <= coarse.error_bound + fine.error_bound);
        }
    }

    #[test]
    fn growing_tails_are_rejected() {
        let pair = ContinuousDensityPair::new(
            Box::new(|x: f64| 0.1 * x),
            Box::new(|x: f64| -x.abs()),
            vec![0.0],
        )
        .unwrap();
        assert!(renyi_continuous(&pair, RenyiOrder::KL, 1e-6).is_err());
    }
}
