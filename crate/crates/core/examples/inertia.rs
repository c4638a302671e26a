//! Exact inertia by symmetric LDLᵀ with 2×2 pivots, a rechecked negative
//! witness, and the floating-point route on the same matrix.
//!
//! cargo run --example inertia

use lasgap::psd_engine::{exact_factorization, numeric_psd, Pivot};
use lasgap::pseudomoments::SymMatrix;
use lasgap::subset_lattice::rat;
use lasgap::RatMatrix;

fn main() -> lasgap::Result<()> {
    let rows = vec![
        vec![rat(0), rat(2), rat(1)],
        vec![rat(2), rat(0), rat(1)],
        vec![rat(1), rat(1), rat(3)],
    ];
    let m = SymMatrix::exact(RatMatrix::from_rows(rows)?, None)?;
    report(&m)?;
    println!();
    // zero diagonal: only a 2×2 pivot can start
    let hollow = vec![
        vec![rat(0), rat(1), rat(2)],
        vec![rat(1), rat(0), rat(1)],
        vec![rat(2), rat(1), rat(0)],
    ];
    report(&SymMatrix::exact(RatMatrix::from_rows(hollow)?, None)?)
}

fn report(m: &SymMatrix) -> lasgap::Result<()> {
    let f = exact_factorization(m)?;
    println!("inertia {:?}", f.inertia);
    for p in &f.pivots {
        match p {
            Pivot::Single { row, value } => println!("  1×1 pivot on row {row}: {value}"),
            Pivot::Block { rows, off_diagonal } => {
                println!("  2×2 pivot on rows {rows:?}, off-diagonal {off_diagonal}")
            }
        }
    }
    if let (Some(w), Some(v)) = (&f.witness, &f.witness_value) {
        let strs: Vec<String> = w.iter().map(|x| x.to_string()).collect();
        println!("witness [{}] with vᵀMv = {v}", strs.join(", "));
    }
    let numeric = numeric_psd(&m.to_float()?, Some(m))?;
    println!(
        "numeric: {:?}, lambda_min {:?}, margin {:?}",
        numeric.status, numeric.lambda_min, numeric.margin
    );
    Ok(())
}
