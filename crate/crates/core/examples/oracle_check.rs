//! Compare closed-form curves with divergences computed directly from the
//! worst-case output distributions.
use tight_zcdp::mechanism::RenyiOrder;
use tight_zcdp::oracle::{mechanism_worst_pair, BrThreshold};
use tight_zcdp::{Mechanism, RdpCurve};

fn main() -> tight_zcdp::Result<()> {
    for m in [
        Mechanism::laplace(0.5)?,
        Mechanism::discrete_laplace(0.5, 10)?,
        Mechanism::krr(2.0, 5)?,
        Mechanism::rappor(1.0, 4)?,
        Mechanism::bounded_range(3.0)?,
    ] {
        let curve = RdpCurve::new(m)?;
        for alpha in [1.0, 1.0 + 1e-6, 2.0, 20.0] {
            let order = RenyiOrder::new(alpha)?;
            let br =
                matches!(m, Mechanism::BoundedRange { .. }).then_some(BrThreshold::Optimal(order));
            let o = mechanism_worst_pair(&m, br)?.divergence(order, 1e-12)?;
            let closed = curve.eval(order);
            println!(
                "{:<28} alpha={:<9} closed={:.15} oracle={:.15} err<={:.1e} {}",
                m.to_string(),
                alpha,
                closed,
                o.value,
                o.error_bound,
                if o.agrees_with(closed, 1e-8) {
                    "ok"
                } else {
                    "MISMATCH"
                }
            );
        }
    }
    Ok(())
}
