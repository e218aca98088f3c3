//! Add up the zCDP cost of a sequence of releases and convert to (eps, delta)-DP.
use tight_zcdp::accountant::{compose_labeled, parse_compose_file};

const PLAN: &str = "\
# daily counts
laplace --eps 0.5
laplace --eps 0.5
# a categorical survey question
krr --eps 1 --k 5
# exponential-mechanism selection
br --eta 1
";

fn main() -> tight_zcdp::Result<()> {
    let ledger = compose_labeled(parse_compose_file(PLAN)?)?;
    for e in &ledger.entries {
        println!("{:>12.9}  {}", e.bound.rho, e.label);
    }
    println!("{:>12.9}  total", ledger.total);
    for delta in [1e-5, 1e-8] {
        println!("eps = {:.6} at delta = {delta:e}", ledger.approx_dp(delta)?);
    }
    Ok(())
}
