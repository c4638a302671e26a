//! Shifted zeta matrices over P_d(n): inverse via the companion matrix,
//! and the entrywise closed form, for every shift S ⊆ [n].
//!
//! cargo run --example zeta_identities -- [n] [d]

use lasgap::subset_lattice::SubsetId;
use lasgap::zeta_algebra::{build_shifted_zeta, check_shift, invert_shifted_zeta};

fn main() -> lasgap::Result<()> {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("numeric argument"))
        .collect();
    let n = args.first().copied().unwrap_or(4);
    let d = args.get(1).copied().unwrap_or(2);

    let s = SubsetId::full(n);
    let z = build_shifted_zeta(n, d, s)?;
    let inv = invert_shifted_zeta(n, d, s)?;
    println!("S = {s}: Z_d(S) has order {}", z.index().len());
    for (r, i) in z.index().iter().enumerate().take(6) {
        let row: Vec<String> = inv.row(r).iter().map(|x| format!("{x:>3}")).collect();
        println!("  {i:>10} | {}", row.join(" "));
    }

    let mut failures = 0;
    for bits in 0..(1u64 << n) {
        let check = check_shift(n, d, SubsetId::from_bits(bits))?;
        if !check.passed() {
            failures += 1;
            println!("  failed: {check:?}");
        }
    }
    println!("{} shifts checked, {failures} failures", 1u64 << n);
    Ok(())
}
