//! Uniform certificate for the tardy-jobs gap family, checked rung by rung.
//!
//! cargo run --release --example tardy_gap -- [n] [k] [theorem] [level] [exact|float|auto]

use std::time::Instant;

use lasgap::psd_engine::{Mode, VerifyOptions};
use lasgap::tardy_gap::{make_certificate, verify_gap, Theorem, DEFAULT_P_LADDER};

fn main() -> lasgap::Result<()> {
    let raw: Vec<String> = std::env::args().skip(1).collect();
    let args: Vec<usize> = raw
        .iter()
        .take(4)
        .map(|a| a.parse().expect("numeric argument"))
        .collect();
    let mode: Mode = raw.get(4).map_or(Ok(Mode::Auto), |m| m.parse())?;
    let n = args.first().copied().unwrap_or(16);
    let k = args.get(1).copied().unwrap_or(2);
    let theorem = Theorem::from_number(args.get(2).copied().unwrap_or(2) as u32)?;
    let (spec, p) = make_certificate(n, theorem, k)?;
    let level = args.get(3).copied().unwrap_or(spec.t);
    println!(
        "n = {n}, k = {k}, t = {}, support up to size {}, alpha = {}",
        spec.t, spec.threshold, spec.alpha
    );

    let options = VerifyOptions {
        condition2_fast_path: false,
        ..VerifyOptions::with_mode(mode)
    };
    let start = Instant::now();
    let report = verify_gap(
        (n as f64).sqrt() as usize,
        &spec,
        &p,
        level,
        &DEFAULT_P_LADDER,
        &options,
    )?;
    for a in &report.attempts {
        println!("  P = {:>14}: {:?}", a.base, a.overall);
    }
    if let Some(v) = &report.verification {
        println!(
            "  moment matrix: dim {} via {:?} -> {:?} (lambda_min {:?}, margin {:?})",
            v.condition2.dimension,
            v.condition2.verdict.method,
            v.condition2.verdict.status,
            v.condition2.verdict.lambda_min,
            v.condition2.verdict.margin
        );
        for c in &v.condition3 {
            println!(
                "  constraint {}: dim {} via {:?} -> {:?} (lambda_min {:?})",
                c.constraint,
                c.matrix.dimension,
                c.matrix.verdict.method,
                c.matrix.verdict.status,
                c.matrix.verdict.lambda_min
            );
        }
    }
    println!(
        "{}: {} [{:.1}s]",
        report.status,
        report.statement,
        start.elapsed().as_secs_f64()
    );
    Ok(())
}
