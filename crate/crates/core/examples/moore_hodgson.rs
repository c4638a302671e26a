//! Minimum number of tardy jobs on the gap instances, by Moore–Hodgson and
//! by exhaustive search, next to the fractional LP optimum.
//!
//! cargo run --example moore_hodgson -- [P]

use lasgap::tardy_gap::{build_instance, exhaustive_min_tardy, moore_hodgson, optimum_report};

fn main() -> lasgap::Result<()> {
    let base: u64 = std::env::args()
        .nth(1)
        .map_or(10, |a| a.parse().expect("P"));
    for m in 1..=6 {
        let inst = build_instance(m, base)?;
        let jobs = inst.jobs();
        let fast = moore_hodgson(&jobs);
        let slow = if jobs.len() <= 16 {
            exhaustive_min_tardy(&jobs)?.tardy_count.to_string()
        } else {
            "-".into()
        };
        let report = optimum_report(&inst)?;
        println!(
            "m = {m}, n = {:>2}: tardy {} (exhaustive {slow}), fractional T = {}, gap {}",
            jobs.len(),
            fast.tardy_count,
            report.fractional_t,
            report.lp_gap.map_or("-".into(), |g| g.to_string())
        );
    }
    Ok(())
}
