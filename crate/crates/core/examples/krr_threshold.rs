//! Where k-ary randomized response stops attaining its zCDP constant at alpha -> 1.
use tight_zcdp::verify::find_non_optimality_witness;
use tight_zcdp::zcdp::krr_threshold;

fn main() -> tight_zcdp::Result<()> {
    println!(
        "{:>8} {:>12}  first k with a larger eps(alpha)/alpha than the KL limit",
        "eps", "k*(eps)"
    );
    for eps in [1e-4, 0.1, 0.5, 1.0, 2.0, 5.0] {
        let k_star = krr_threshold(eps)?;
        let first =
            (2..200u64).find(|&k| find_non_optimality_witness(eps, k, 1000.0, 2000).is_some());
        println!("{eps:>8} {k_star:>12.6}  {first:?}");
    }
    Ok(())
}
