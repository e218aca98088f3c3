//! Certify that the reported constants are the supremum of eps(alpha)/alpha.
use tight_zcdp::verify::{certify_tightness, DEFAULT_ALPHA_MAX};
use tight_zcdp::Mechanism;

fn main() -> tight_zcdp::Result<()> {
    for m in [
        Mechanism::laplace(1.0)?,
        Mechanism::krr(1.0, 6)?,
        Mechanism::krr(1.0, 9)?,
        Mechanism::bounded_range(2.0)?,
    ] {
        let r = certify_tightness(&m, DEFAULT_ALPHA_MAX, 1e-10)?;
        println!(
            "{}: {}",
            r.mechanism,
            if r.pass { "certified" } else { "FAILED" }
        );
        for c in &r.claims {
            println!("  {:<28} {}", c.name, if c.pass { "ok" } else { "fail" });
        }
    }
    Ok(())
}
