//! Partial diagonalization of a zeta-sum matrix on a shifted collection:
//! diagonal part, remainder terms and the resulting eigenvalue bounds.
//!
//! cargo run --example partial_diagonalization -- [n] [k] [eps]

use lasgap::diagonalizer::partial_diagonalize;
use lasgap::polyopt_gap::make_certificate;
use lasgap::subset_lattice::{parse_rational, SubsetId};

fn main() -> lasgap::Result<()> {
    let raw: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = raw.first().map_or(4, |a| a.parse().expect("n"));
    let k: usize = raw.get(1).map_or(2, |a| a.parse().expect("k"));
    let eps = parse_rational(raw.get(2).map_or("1/64", String::as_str))?;

    let p = make_certificate(n, k, &eps)?;
    let r = partial_diagonalize(&p, None, k - 1, SubsetId::full(n))?;
    println!(
        "collection {:?}",
        r.collection
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
    );
    println!(
        "diagonal   {:?}",
        r.diagonal.iter().map(|x| x.to_string()).collect::<Vec<_>>()
    );
    for term in &r.remainder {
        let norm: lasgap::subset_lattice::Rational = term.vector.iter().map(|x| x * x).sum();
        println!(
            "remainder at {} with weight {}, |R|² = {norm}",
            term.set, term.weight
        );
    }
    println!("min diagonal    {}", r.min_diagonal());
    println!("Weyl bound      {}", r.weyl_lower_bound());
    println!("envelope bound  {}", r.envelope_lower_bound());
    if let Some((_, value)) = r.diagonal_witness()? {
        println!("negative diagonal entry gives vᵀMv = {value}");
    }
    Ok(())
}
