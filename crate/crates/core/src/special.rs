//! Numerically stable scalar primitives.
//!
//! Every closed form in the crate is assembled from these. The guiding rule is
//! that no public routine forms a difference of two nearly equal numbers: the
//! quantities `e^x - 1 - x`, `sinh(x)/x - 1` and `log(e^x - 1)` each get a
//! dedicated evaluation path instead.

use crate::error::{domain, Result};

/// Below this, `sinh(x)/x` is evaluated by its Taylor polynomial.
const SINHC_TAYLOR_CUTOFF: f64 = 1e-4;
/// Above this, `log(sinh(x)/x)` switches to its asymptotic form.
const LOG_SINHC_ASYMPTOTIC_CUTOFF: f64 = 20.0;

fn require_nonnegative(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(domain(format!("{name} requires a finite x >= 0, got {x}")))
    }
}

/// `sinh(x) / x`, with the removable singularity at zero filled in by 1.
pub fn sinhc(x: f64) -> Result<f64> {
    require_nonnegative("sinhc", x)?;
    let value = if x < SINHC_TAYLOR_CUTOFF {
        let x2 = x * x;
        1.0 + x2 / 6.0 + x2 * x2 / 120.0
    } else {
        1.0 + sinhc_minus_one_unchecked(x)
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(domain(format!(
            "sinhc({x}) overflows a double; use log_sinhc"
        )))
    }
}

/// `sinh(x)/x - 1`, accurate to full relative precision near zero.
pub fn sinhc_minus_one(x: f64) -> Result<f64> {
    require_nonnegative("sinhc_minus_one", x)?;
    Ok(sinhc_minus_one_unchecked(x))
}

pub(crate) fn sinhc_minus_one_unchecked(x: f64) -> f64 {
    if x < 1.0 {
        // sum_{n>=1} x^{2n} / (2n+1)!
        let x2 = x * x;
        let mut term = x2 / 6.0;
        let mut sum = 0.0;
        let mut n = 1.0;
        while term > f64::EPSILON * 1e-2 * sum || sum == 0.0 {
            sum += term;
            if term == 0.0 {
                break;
            }
            term *= x2 / ((2.0 * n + 2.0) * (2.0 * n + 3.0));
            n += 1.0;
        }
        sum
    } else {
        x.sinh() / x - 1.0
    }
}

/// `phi(x) = log(sinh(x) / x)`; strictly convex, superadditive, `phi(0) = 0`.
pub fn log_sinhc(x: f64) -> Result<f64> {
    require_nonnegative("log_sinhc", x)?;
    Ok(log_sinhc_unchecked(x))
}

pub(crate) fn log_sinhc_unchecked(x: f64) -> f64 {
    if x <= LOG_SINHC_ASYMPTOTIC_CUTOFF {
        sinhc_minus_one_unchecked(x).ln_1p()
    } else {
        x - (2.0 * x).ln() + (-(-2.0 * x).exp()).ln_1p()
    }
}

/// `log sum_i exp(log_weight_i + log_value_i)` with the maximum factored out.
///
/// Terms whose weight is `exp(-inf) = 0` are allowed and contribute nothing,
/// but at least one term must carry finite mass.
pub fn log_sum_exp(terms: &[(f64, f64)]) -> Result<f64> {
    if terms.is_empty() {
        return Err(domain("log_sum_exp of an empty list"));
    }
    if terms
        .iter()
        .any(|&(w, v)| w.is_nan() || v.is_nan() || w == f64::INFINITY || v == f64::INFINITY)
    {
        return Err(domain("log_sum_exp terms must not be NaN or +inf"));
    }
    let exponents: Vec<f64> = terms.iter().map(|&(w, v)| w + v).collect();
    let value = lse(&exponents);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(domain("log_sum_exp: every term has zero weight"))
    }
}

/// Unchecked log-sum-exp over raw exponents. Returns `-inf` for all `-inf` input.
pub(crate) fn lse(exponents: &[f64]) -> f64 {
    let max = exponents.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    let sum: f64 = exponents.iter().map(|&e| (e - max).exp()).sum();
    max + sum.ln()
}

/// `e^x - 1 - x` without cancellation for small `|x|`. Non-negative for all x.
pub fn expm1_minus_x(x: f64) -> f64 {
    if x.abs() < 0.5 {
        // sum_{n>=2} x^n / n!
        let mut term = x * x / 2.0;
        let mut sum = 0.0;
        let mut n = 2.0;
        loop {
            sum += term;
            if term.abs() <= 1e-18 * sum.abs() || term == 0.0 {
                break;
            }
            n += 1.0;
            term *= x / n;
        }
        sum
    } else {
        x.exp_m1() - x
    }
}

/// `log(e^x - 1)` for `x > 0`, stable for tiny and huge `x`.
pub fn log_expm1(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    x + (-(-x).exp_m1()).ln()
}

/// `e^s + e^{-s} - 2 = 4 sinh^2(s/2)`.
pub(crate) fn cosh_minus_one_twice(s: f64) -> f64 {
    let h = (0.5 * s).sinh();
    4.0 * h * h
}

/// `log(tanh(a/2))` for `a > 0`.
pub(crate) fn log_tanh_half(a: f64) -> f64 {
    let q = (-a).exp();
    (-(-a).exp_m1()).ln() - q.ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// sinh(x)/x by summing its Maclaurin series to exhaustion.
    fn sinhc_series_oracle(x: f64) -> f64 {
        let mut term = 1.0f64;
        let mut sum = 0.0f64;
        let mut n = 0.0;
        while term > 1e-30 {
            sum += term;
            term *= x * x / ((2.0 * n + 2.0) * (2.0 * n + 3.0));
            n += 1.0;
        }
        sum
    }

    #[test]
    fn sinhc_at_zero_is_one() {
        assert_eq!(sinhc(0.0).unwrap(), 1.0);
    }

    #[test]
    fn sinhc_at_one_matches_series() {
        let oracle = sinhc_series_oracle(1.0);
        assert!((oracle - 1.175_201_193_643_801_4).abs() < 1e-15);
        assert!((sinhc(1.0).unwrap() - oracle).abs() < 1e-15);
    }

    #[test]
    fn sinhc_tiny_argument_does_not_degenerate() {
        let v = sinhc(1e-9).unwrap();
        assert!(v.is_finite());
        assert!((v - 1.0).abs() < 1e-17);
        assert!((sinhc_minus_one(1e-9).unwrap() - 1e-18 / 6.0).abs() < 1e-30);
    }

    #[test]
    fn sinhc_rejects_negative_and_overflow() {
        assert!(matches!(sinhc(-1.0), Err(crate::Error::Domain(_))));
        assert!(sinhc(800.0).is_err());
        assert!(log_sinhc(-0.5).is_err());
        assert!(sinhc(f64::NAN).is_err());
    }

    #[test]
    fn log_sinhc_reference_values() {
        assert_eq!(log_sinhc(0.0).unwrap(), 0.0);
        let oracle = sinhc_series_oracle(2.0).ln();
        assert!((log_sinhc(2.0).unwrap() - oracle).abs() < 1e-15);
        let big = log_sinhc(800.0).unwrap();
        assert!((big - (800.0 - 1600f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn log_sinhc_branches_agree_at_cutoff() {
        let below = sinhc_minus_one_unchecked(20.0).ln_1p();
        let above = 20.0 - 40f64.ln() + (-(-40f64).exp()).ln_1p();
        assert!((below - above).abs() < 1e-13);
        // Small arguments keep relative precision: phi(x) ~ x^2/6.
        let x = 1e-3;
        let phi = log_sinhc(x).unwrap();
        let oracle = (sinhc_series_oracle(x) - 1.0).ln_1p();
        assert!(((phi - x * x / 6.0) / phi).abs() < 1e-5);
        assert!(((phi - oracle) / phi).abs() < 1e-9);
    }

    #[test]
    fn log_sum_exp_examples() {
        assert_eq!(log_sum_exp(&[(0.0, 0.0)]).unwrap(), 0.0);
        assert_eq!(log_sum_exp(&[(0.0, 1000.0), (0.0, 0.0)]).unwrap(), 1000.0);
        let half = 0.5f64.ln();
        assert!(log_sum_exp(&[(half, 0.0), (half, 0.0)]).unwrap().abs() < 1e-16);
        assert!(matches!(log_sum_exp(&[]), Err(crate::Error::Domain(_))));
        assert!(log_sum_exp(&[(f64::NEG_INFINITY, 0.0)]).is_err());
    }

    #[test]
    fn expm1_minus_x_matches_series_and_direct() {
        for &x in &[-0.7f64, -0.49, -1e-3, 1e-8, 0.3, 0.49, 0.51, 2.0] {
            let direct = x.exp_m1() - x;
            let v = expm1_minus_x(x);
            assert!(v >= 0.0);
            if x.abs() > 0.1 {
                assert!(((v - direct) / v).abs() < 1e-14, "x={x}");
            }
        }
        assert!((expm1_minus_x(1e-8) / (5e-17 + 1e-24 / 6.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn log_expm1_extremes() {
        assert!((log_expm1(1e-10) - (1e-10f64).ln()).abs() < 1e-9);
        assert!((log_expm1(800.0) - 800.0).abs() < 1e-300);
        assert!((log_expm1(1.0) - (1f64.exp() - 1.0).ln()).abs() < 1e-15);
    }

    #[test]
    fn log_tanh_half_matches_direct() {
        for &a in &[1e-6, 0.1, 1.0, 5.0, 40.0] {
            let direct = (a / 2.0f64).tanh().ln();
            assert!((log_tanh_half(a) - direct).abs() < 1e-13 * direct.abs().max(1e-3));
        }
    }

    proptest! {
        #[test]
        fn sinhc_is_monotone(x in 0.0f64..50.0, y in 0.0f64..50.0) {
            let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
            prop_assert!(sinhc(lo).unwrap() <= sinhc(hi).unwrap());
            prop_assert!(sinhc(lo).unwrap() >= 1.0);
        }

        #[test]
        fn log_sinhc_is_convex(x in 0.0f64..50.0, y in 0.0f64..50.0, t in 0.0f64..=1.0) {
            let mid = log_sinhc(t * x + (1.0 - t) * y).unwrap();
            let chord = t * log_sinhc(x).unwrap() + (1.0 - t) * log_sinhc(y).unwrap();
            let tol = 1e-12 * chord.abs().max(1.0);
            prop_assert!(mid <= chord + tol);
        }

        #[test]
        fn log_sinhc_is_superadditive(x in 0.0f64..50.0, y in 0.0f64..50.0) {
            let lhs = log_sinhc(x + y).unwrap();
            let rhs = log_sinhc(x).unwrap() + log_sinhc(y).unwrap();
            prop_assert!(lhs >= rhs - 1e-12 * rhs.abs().max(1.0));
        }
    }
}
