use proptest::prelude::*;
use tight_zcdp::mechanism::{Mechanism, RenyiOrder};
use tight_zcdp::oracle::{
    mechanism_worst_pair, random_bounded_ratio_pair, random_dp_pair, renyi_discrete, BrThreshold,
};
use tight_zcdp::rdp::{rdp_br, rdp_generic_dp, RdpCurve};

fn mechanism() -> impl Strategy<Value = Mechanism> {
    let eps = 0.02f64..8.0;
    prop_oneof![
        eps.clone().prop_map(|eps| Mechanism::GenericDp { eps }),
        eps.clone().prop_map(|eps| Mechanism::Laplace { eps }),
        (eps.clone(), 1u64..40).prop_map(|(eps, delta)| Mechanism::DiscreteLaplace { eps, delta }),
        (eps.clone(), 2u64..60).prop_map(|(eps, k)| Mechanism::Krr { eps, k }),
        (eps.clone(), 2u64..10).prop_map(|(eps, d)| Mechanism::Rappor { eps, d }),
        eps.prop_map(|eta| Mechanism::BoundedRange { eta }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_form_matches_worst_case_pair(m in mechanism(), alpha in 1.0f64..60.0) {
        let order = RenyiOrder::new(alpha).unwrap();
        let closed = RdpCurve::new(m).unwrap().eval(order);
        let br = matches!(m, Mechanism::BoundedRange { .. }).then_some(BrThreshold::Optimal(order));
        let oracle = mechanism_worst_pair(&m, br).unwrap().divergence(order, 1e-12).unwrap();
        prop_assert!(oracle.agrees_with(closed, 1e-8), "{m} alpha={alpha}: {closed} vs {oracle:?}");
    }

    #[test]
    fn random_dp_pairs_are_dominated(n in 2usize..16, eps in 0.05f64..10.0, seed: u64, alpha in 1.0f64..20.0) {
        let (p, q) = random_dp_pair(n, eps, seed).unwrap();
        let order = RenyiOrder::new(alpha).unwrap();
        let d = renyi_discrete(&p, &q, order).unwrap();
        prop_assert!(d.value <= rdp_generic_dp(eps, order).unwrap() + 1e-10);
    }

    #[test]
    fn random_bounded_range_pairs_are_dominated(n in 2usize..16, eta in 0.05f64..10.0, seed: u64, alpha in 1.0f64..20.0) {
        let (p, q, _) = random_bounded_ratio_pair(n, eta, seed).unwrap();
        let order = RenyiOrder::new(alpha).unwrap();
        let d = renyi_discrete(&p, &q, order).unwrap();
        prop_assert!(d.value <= rdp_br(eta, order).unwrap() + 1e-10);
    }
}

#[test]
fn curves_are_monotone_and_capped() {
    let alphas: Vec<f64> = (0..200)
        .map(|i| 1.0 + 0.05 * (1.07f64).powi(i) - 0.05)
        .collect();
    for eps in [0.1, 1.0, 4.0] {
        for m in [
            Mechanism::GenericDp { eps },
            Mechanism::Laplace { eps },
            Mechanism::DiscreteLaplace { eps, delta: 3 },
            Mechanism::Krr { eps, k: 7 },
            Mechanism::Rappor { eps, d: 4 },
            Mechanism::BoundedRange { eta: eps },
        ] {
            let c = RdpCurve::new(m).unwrap();
            let mut prev = f64::NEG_INFINITY;
            for &a in &alphas {
                let v = c.eval_alpha(a).unwrap();
                assert!(v >= prev - 1e-14 && v <= eps + 1e-14, "{m} alpha={a}");
                prev = v;
            }
        }
    }
}

#[test]
fn curves_are_continuous_at_one() {
    for m in [
        Mechanism::GenericDp { eps: 2.0 },
        Mechanism::Laplace { eps: 2.0 },
        Mechanism::DiscreteLaplace { eps: 2.0, delta: 5 },
        Mechanism::Krr { eps: 2.0, k: 30 },
        Mechanism::BoundedRange { eta: 2.0 },
    ] {
        let c = RdpCurve::new(m).unwrap();
        let kl = c.kl();
        for h in [1e-4, 1e-6] {
            let v = c.eval(RenyiOrder::from_excess(h).unwrap());
            assert!((v - kl).abs() <= 10.0 * h, "{m} h={h}");
        }
    }
}
