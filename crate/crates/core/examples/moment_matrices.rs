//! Moment and localizing matrices of a signed pseudo-distribution, built
//! once from the moment vector and once as a weighted sum of zeta outer
//! products.
//!
//! cargo run --example moment_matrices

use lasgap::pseudomoments::{
    constraint_moment_matrix, moment_matrix, pushforward, zeta_sum_matrix, LinearConstraint,
};
use lasgap::subset_lattice::{
    mobius_transform, rat, ratio, zeta_transform, PseudoDistribution, SubsetId,
};

fn main() -> lasgap::Result<()> {
    let set = |labels: &[usize]| SubsetId::from_labels(labels.iter().copied()).unwrap();
    let p = PseudoDistribution::from_weights(
        4,
        [
            (set(&[]), ratio(1, 2)),
            (set(&[1, 2]), ratio(3, 4)),
            (set(&[2, 3, 4]), ratio(-1, 4)),
        ],
    )?;
    let t = 1;
    let y = zeta_transform(&p, t + 1);
    println!(
        "y_∅ = {}, y_{{2}} = {}",
        y.get(set(&[]))?,
        y.get(set(&[2]))?
    );

    let m = moment_matrix(&y, t)?;
    let same = m == zeta_sum_matrix(&p, None, t)?;
    println!(
        "moment matrix order {}: zeta-sum form agrees: {same}",
        m.dim()
    );

    // x_1 + x_2 - x_4 >= 1/2
    let g =
        LinearConstraint::greater_equal(vec![(0, rat(1)), (1, rat(1)), (3, rat(-1))], ratio(1, 2));
    let local = constraint_moment_matrix(&y, &g, t)?;
    println!(
        "localizing matrix agrees: {}",
        local == zeta_sum_matrix(&p, Some(&g), t)?
    );

    let pushed = pushforward(&p, &g)?;
    for (s, w) in pushed.support()? {
        println!("  g·p at {s}: {w}");
    }
    let back = mobius_transform(&zeta_transform(&p, 2))?;
    println!("Möbius recovers p: {}", back == p);
    Ok(())
}
