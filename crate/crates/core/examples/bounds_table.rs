//! zCDP constants for every supported mechanism at a few privacy levels.
use tight_zcdp::{zcdp_bound, Mechanism};

fn main() -> tight_zcdp::Result<()> {
    println!("{:<36} {:>14} {:>6}  source", "mechanism", "rho", "tight");
    for eps in [0.1, 1.0, 4.0] {
        let mechanisms = [
            Mechanism::generic_dp(eps)?,
            Mechanism::laplace(eps)?,
            Mechanism::discrete_laplace(eps, 2)?,
            Mechanism::krr(eps, 4)?,
            Mechanism::krr(eps, 50)?,
            Mechanism::rappor(eps, 8)?,
            Mechanism::bounded_range(eps)?,
        ];
        for m in mechanisms {
            let b = zcdp_bound(&m)?;
            println!(
                "{:<36} {:>14.9} {:>6}  {}",
                m.to_string(),
                b.rho,
                b.tight,
                b.source
            );
        }
        println!();
    }
    Ok(())
}
