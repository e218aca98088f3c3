//! Rényi-DP curves and where their normalised value eps(alpha)/alpha peaks.
use tight_zcdp::verify::sup_rdp_over_alpha;
use tight_zcdp::{Mechanism, RdpCurve};

fn main() -> tight_zcdp::Result<()> {
    let alphas = [1.0, 1.5, 2.0, 4.0, 8.0, 16.0, 64.0];
    print!("{:<28}", "mechanism");
    for a in alphas {
        print!(" {:>10}", format!("a={a}"));
    }
    println!(" {:>12} {:>10}", "sup e/a", "argmax");
    for m in [
        Mechanism::generic_dp(1.0)?,
        Mechanism::laplace(1.0)?,
        Mechanism::discrete_laplace(1.0, 3)?,
        Mechanism::krr(1.0, 20)?,
        Mechanism::bounded_range(1.0)?,
    ] {
        let curve = RdpCurve::new(m)?;
        print!("{:<28}", m.to_string());
        for a in alphas {
            print!(" {:>10.6}", curve.eval_alpha(a)?);
        }
        let sup = sup_rdp_over_alpha(&curve, 1000.0, 1e-10);
        println!(" {:>12.9} {:>10.4}", sup.sup_value, sup.alpha_star);
    }
    Ok(())
}
