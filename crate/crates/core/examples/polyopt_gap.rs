//! Degree-k multilinear objective whose level-(k−1) pseudo-expectation
//! exceeds the true maximum by ε·C(n, k).
//!
//! cargo run --example polyopt_gap -- [n] [k]

use lasgap::polyopt_gap::{default_eps_ladder, verify_polyopt};
use lasgap::psd_engine::{Mode, VerifyOptions};

fn main() -> lasgap::Result<()> {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("numeric argument"))
        .collect();
    let n = args.first().copied().unwrap_or(5);
    let k = args.get(1).copied().unwrap_or(3);

    let r = verify_polyopt(
        n,
        k,
        &default_eps_ladder(),
        &VerifyOptions::with_mode(Mode::Exact),
    )?;
    println!("max f = {}", r.integral_optimum);
    for a in &r.attempts {
        println!("  eps = {:>12}: {:?}", a.eps.to_string(), a.overall);
    }
    if let (Some(eps), Some(value)) = (&r.passing_eps, &r.pseudo_value) {
        println!("pseudo-expectation {value} at eps = {eps}");
    }
    if let Some(c) = &r.diagonal_check {
        println!(
            "diagonal check: |R|² = {}, Weyl bound {}, agrees with factorization: {}",
            c.remainder_norm_squared, c.weyl_lower_bound, c.agrees_with_factorization
        );
    }
    println!("{}: {}", r.status, r.statement);
    Ok(())
}
