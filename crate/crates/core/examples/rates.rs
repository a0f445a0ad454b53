//! Convergence-rate exponents across the dense, sparse and profile-limited regimes.
//!
//! cargo run --example rates

use deconwave::rates::{rate_exponent, RateParams};

fn main() -> deconwave::Result<()> {
    println!("  s1   s2    p  nu  regime           d       d1");
    for (s1, s2, p, nu) in [
        (2.0, 1.0, 2.0, 1.0),
        (2.0, 1.0, 1.0, 2.0),
        (1.0, 0.6, 2.0, 1.0),
        (3.0, 2.0, 1.2, 0.5),
        (1.5, 1.0, 1.0, 0.5),
    ] {
        let rate = rate_exponent(&RateParams {
            s1,
            s2,
            p,
            q: 2.0,
            nu,
        })?;
        println!(
            "{s1:4} {s2:4} {p:4} {nu:3}  {:<15} {:.5}  {}",
            rate.regime.label(),
            rate.d,
            rate.d1
        );
    }
    Ok(())
}
