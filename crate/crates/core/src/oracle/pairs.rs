use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    renyi_continuous, renyi_discrete, renyi_discrete_laplace, ContinuousDensityPair, DiscreteDist,
    OracleResult,
};
use crate::error::{domain, require_positive, Error, Result};
use crate::mechanism::{Mechanism, RenyiOrder};
use crate::rdp::{br_optimal_t_unchecked, br_two_point};

/// Largest RAPPOR dimension whose `2^d` output table the oracle will enumerate.
pub const RAPPOR_ORACLE_MAX_D: u64 = 16;

/// Where to place a bounded-range pair's log-ratios `{-t, eta - t}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BrThreshold {
    /// A fixed `t` in `[0, eta]`.
    At(f64),
    /// The `t` that maximises the divergence at this order.
    Optimal(RenyiOrder),
}

/// The pair of output distributions on neighbouring inputs that attains a
/// mechanism's RDP curve.
#[derive(Debug)]
pub enum WorstPair {
    Discrete(DiscreteDist, DiscreteDist),
    /// `Z + shift` against `Z`, with `Z` discrete Laplace of decay `a`.
    DiscreteLaplace {
        a: f64,
        shift: u64,
    },
    Continuous(ContinuousDensityPair),
}

impl WorstPair {
    /// Oracle divergence of the pair; `tol` applies to the truncated and
    /// integrated cases.
    pub fn divergence(&self, order: RenyiOrder, tol: f64) -> Result<OracleResult> {
        match self {
            Self::Discrete(p, q) => renyi_discrete(p, q, order),
            Self::DiscreteLaplace { a, shift } => {
                renyi_discrete_laplace(*a, *shift as i64, order, tol)
            }
            Self::Continuous(pair) => renyi_continuous(pair, order, tol),
        }
    }
}

/// `(e^eps / (e^eps + k - 1), 1 / (e^eps + k - 1))`
fn rr_masses(eps: f64, k: u64) -> (f64, f64) {
    let other = 1.0 / (eps.exp() + (k - 1) as f64);
    let keep = 1.0 / (1.0 + (k - 1) as f64 * (-eps).exp());
    (keep, other)
}

fn krr_rows(eps: f64, k: u64) -> Result<WorstPair> {
    let (keep, other) = rr_masses(eps, k);
    let mut p = vec![other; k as usize];
    let mut q = p.clone();
    p[0] = keep;
    q[1] = keep;
    Ok(WorstPair::Discrete(
        DiscreteDist::from_masses(p)?,
        DiscreteDist::from_masses(q)?,
    ))
}

/// Product distribution of `d` independent bits, the `j`-th set with
/// probability `prob_one[j]`; outcome index has bit `j` equal to bit `j` of the output.
fn product_bits(prob_one: &[f64]) -> Vec<f64> {
    let mut mass = vec![1.0];
    for (j, &p1) in prob_one.iter().enumerate() {
        let mut next = vec![0.0; mass.len() * 2];
        for (y, m) in mass.iter().enumerate() {
            next[y] = m * (1.0 - p1);
            next[y | (1 << j)] = m * p1;
        }
        mass = next;
    }
    mass
}

fn rappor_rows(eps: f64, d: u64) -> Result<WorstPair> {
    if d > RAPPOR_ORACLE_MAX_D {
        return Err(Error::Unsupported(format!(
            "brute-force oracle unsupported at this dimension (d = {d} > {RAPPOR_ORACLE_MAX_D})"
        )));
    }
    let flip = 1.0 / ((0.5 * eps).exp() + 1.0);
    let encode = |symbol: usize| -> Vec<f64> {
        (0..d as usize)
            .map(|j| if j == symbol { 1.0 - flip } else { flip })
            .collect()
    };
    Ok(WorstPair::Discrete(
        DiscreteDist::from_masses(product_bits(&encode(0)))?,
        DiscreteDist::from_masses(product_bits(&encode(1)))?,
    ))
}

fn laplace_densities(eps: f64) -> Result<WorstPair> {
    let c = (0.5 * eps).ln();
    Ok(WorstPair::Continuous(ContinuousDensityPair::new(
        Box::new(move |x: f64| c - eps * (x - 1.0).abs()),
        Box::new(move |x: f64| c - eps * x.abs()),
        vec![0.0, 1.0],
    )?))
}

/// Worst-case neighbouring output pair for `m`. Bounded range needs `br`.
pub fn mechanism_worst_pair(m: &Mechanism, br: Option<BrThreshold>) -> Result<WorstPair> {
    match m.validated()? {
        Mechanism::GenericDp { eps } => krr_rows(eps, 2),
        Mechanism::Krr { eps, k } => krr_rows(eps, k),
        Mechanism::Laplace { eps } => laplace_densities(eps),
        Mechanism::DiscreteLaplace { eps, delta } => Ok(WorstPair::DiscreteLaplace {
            a: eps / delta as f64,
            shift: delta,
        }),
        Mechanism::Rappor { eps, d } => rappor_rows(eps, d),
        Mechanism::BoundedRange { eta } => {
            let t = match br {
                Some(BrThreshold::At(t)) => {
                    if !(0.0..=eta).contains(&t) {
                        return Err(domain(format!("t must lie in [0, {eta}], got {t}")));
                    }
                    t
                }
                Some(BrThreshold::Optimal(order)) => br_optimal_t_unchecked(eta, order.excess()),
                None => {
                    return Err(Error::Precondition(
                        "bounded range worst pair needs a threshold t".into(),
                    ))
                }
            };
            let pair = br_two_point(eta, t);
            Ok(WorstPair::Discrete(
                DiscreteDist::from_masses(pair.p.to_vec())?,
                DiscreteDist::from_masses(pair.q.to_vec())?,
            ))
        }
    }
}

fn check_outcomes(outcomes: usize) -> Result<()> {
    if outcomes < 2 {
        return Err(domain(format!("need at least 2 outcomes, got {outcomes}")));
    }
    Ok(())
}

/// Normalises positive weights, dividing by their sum.
fn normalise(w: &[f64]) -> Vec<f64> {
    let s: f64 = w.iter().sum();
    w.iter().map(|x| x / s).collect()
}

/// A random pair whose log-ratios `log(P/Q)` all lie in `[-t, width - t]`.
///
/// `Q` has weights `e^{U(-3, 3)}`, the log-ratios start as `U(0, width)` and
/// renormalising `P` shifts them all by `-t`. Returns `(P, Q, t)`.
pub fn random_bounded_ratio_pair(
    outcomes: usize,
    width: f64,
    seed: u64,
) -> Result<(DiscreteDist, DiscreteDist, f64)> {
    check_outcomes(outcomes)?;
    require_positive("width", width)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q_w: Vec<f64> = (0..outcomes)
        .map(|_| rng.gen_range(-3.0..3.0f64).exp())
        .collect();
    let q = normalise(&q_w);
    let p_w: Vec<f64> = q
        .iter()
        .map(|&qi| qi * rng.gen_range(0.0..=width).exp())
        .collect();
    let z: f64 = p_w.iter().sum();
    let p = normalise(&p_w);
    Ok((
        DiscreteDist::from_masses(p)?,
        DiscreteDist::from_masses(q)?,
        z.ln().clamp(0.0, width),
    ))
}

/// A random pair with every log-ratio in `[-eps, eps]`.
///
/// Log-ratios are drawn uniformly (a quarter of them pinned to `+-eps`) and
/// `Q`'s weights on the positive ones are rescaled so that `P = Q e^L` has
/// the same total mass as `Q`.
pub fn random_dp_pair(
    outcomes: usize,
    eps: f64,
    seed: u64,
) -> Result<(DiscreteDist, DiscreteDist)> {
    check_outcomes(outcomes)?;
    require_positive("eps", eps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut l: Vec<f64> = (0..outcomes)
        .map(|_| {
            let u: f64 = rng.gen();
            if u < 0.125 {
                eps
            } else if u < 0.25 {
                -eps
            } else {
                rng.gen_range(-eps..=eps)
            }
        })
        .collect();
    // one strictly positive and one strictly negative ratio
    l[0] = l[0].abs().max(0.5 * eps);
    l[1] = -l[1].abs().max(0.5 * eps);
    let w: Vec<f64> = (0..outcomes)
        .map(|_| rng.gen_range(-2.0..2.0f64).exp())
        .collect();

    let mut up = 0.0;
    let mut down = 0.0;
    for (&li, &wi) in l.iter().zip(&w) {
        if li > 0.0 {
            up += wi * li.exp_m1();
        } else {
            down -= wi * li.exp_m1();
        }
    }
    // Scaling the positive-ratio weights by down/up makes sum Q (e^L - 1) = 0.
    let lambda = down / up;
    let q: Vec<f64> = l
        .iter()
        .zip(&w)
        .map(|(&li, &wi)| if li > 0.0 { wi * lambda } else { wi })
        .collect();
    let p: Vec<f64> = q.iter().zip(&l).map(|(&qi, &li)| qi * li.exp()).collect();
    let (q, p) = (normalise(&q), normalise(&p));
    Ok((DiscreteDist::from_masses(p)?, DiscreteDist::from_masses(q)?))
}
