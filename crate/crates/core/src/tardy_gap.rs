//! Minimum number of tardy jobs: the gap instance family, its covering LP,
//! integral and fractional optima, and the uniform pseudo-distribution
//! certificates checked against the hierarchy.
//!
//! Block `i` (1..=m) holds `m` jobs with processing time `P^i` and a common
//! deadline `d_i = m Σ_{j<=i} P^j − Σ_{j<=i} P^{j−1}`. Job `(i, j)` is
//! variable `(i−1)m + (j−1)` (0-based), and `x = 1` means tardy.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::psd_engine::{
    verify_conditions, CertificateSource, Overall, VerificationReport, VerifyOptions,
};
use crate::pseudomoments::LinearConstraint;
use crate::subset_lattice::{
    count_subsets, option_rational_string, pow_int, rational_string, PseudoDistribution, Rational,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapInstance {
    pub m: usize,
    #[serde(rename = "P")]
    pub base: u64,
}

/// Blocks beyond this make `n = m²` exceed the subset bitmask width.
pub const MAX_BLOCKS: usize = 8;

pub fn build_instance(m: usize, base: u64) -> Result<GapInstance> {
    if m == 0 || m > MAX_BLOCKS {
        return Err(Error::Parameter(format!(
            "m = {m} outside 1..={MAX_BLOCKS}"
        )));
    }
    if base < 2 {
        return Err(Error::Parameter(format!("P = {base} must be at least 2")));
    }
    Ok(GapInstance { m, base })
}

impl GapInstance {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: GapInstance = serde_json::from_str(text)?;
        build_instance(raw.m, raw.base)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn n(&self) -> usize {
        self.m * self.m
    }

    /// 1-based block of 0-based variable `var`.
    pub fn block_of(&self, var: usize) -> usize {
        var / self.m + 1
    }

    pub fn var(&self, block: usize, job: usize) -> usize {
        (block - 1) * self.m + (job - 1)
    }

    /// `P^i`.
    pub fn processing(&self, block: usize) -> BigInt {
        pow_int(self.base, block as u32)
    }

    pub fn deadline(&self, block: usize) -> BigInt {
        let m = BigInt::from(self.m);
        (1..=block)
            .map(|j| &m * pow_int(self.base, j as u32) - pow_int(self.base, j as u32 - 1))
            .sum()
    }

    /// `D_i = Σ_{j<=i} P^{j−1}`.
    pub fn demand(&self, block: usize) -> BigInt {
        (1..=block).map(|j| pow_int(self.base, j as u32 - 1)).sum()
    }

    /// `(processing, deadline)` for every job, in variable order.
    pub fn jobs(&self) -> Vec<(BigInt, BigInt)> {
        (0..self.n())
            .map(|v| {
                let b = self.block_of(v);
                (self.processing(b), self.deadline(b))
            })
            .collect()
    }

    /// `Σ_{d_j <= d_i} p_j − d_i`, the processing that must be tardy by `d_i`.
    pub fn overload(&self, block: usize) -> BigInt {
        let di = self.deadline(block);
        let jobs = self.jobs();
        let due: BigInt = jobs
            .iter()
            .filter(|(_, d)| *d <= di)
            .map(|(p, _)| p.clone())
            .sum();
        due - di
    }
}

/// Cardinality `T − Σ x ≥ 0` first, then the demand constraints
/// `Σ_{i<=ℓ} Σ_j P^i x_{ij} − D_ℓ ≥ 0` for `ℓ = 1..=m`.
pub fn lp_constraints(inst: &GapInstance, t: &Rational) -> Vec<LinearConstraint> {
    let n = inst.n();
    let mut out = Vec::with_capacity(inst.m + 1);
    out.push(LinearConstraint::greater_equal(
        (0..n).map(|v| (v, -Rational::one())),
        -t.clone(),
    ));
    for l in 1..=inst.m {
        let coeffs = (1..=l).flat_map(|i| {
            let p = Rational::from_integer(inst.processing(i));
            (1..=inst.m).map(move |j| (inst.var(i, j), p.clone()))
        });
        out.push(LinearConstraint::greater_equal(
            coeffs.collect::<Vec<_>>(),
            Rational::from_integer(inst.demand(l)),
        ));
    }
    out
}

/// `x_{ij} = 1/(√n P)` with `T = √n / P`.
pub fn fractional_point(inst: &GapInstance) -> (Vec<Rational>, Rational) {
    let m = BigInt::from(inst.m);
    let p = BigInt::from(inst.base);
    let x = Rational::new(BigInt::one(), &m * &p);
    (vec![x; inst.n()], Rational::new(m, p))
}

pub fn satisfies_all(constraints: &[LinearConstraint], x: &[Rational]) -> bool {
    constraints.iter().all(|c| !c.evaluate(x).is_negative())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TardySchedule {
    pub tardy_count: usize,
    /// 0-based job indices, ascending.
    pub tardy: Vec<usize>,
}

/// Moore–Hodgson. Jobs are taken in `(deadline, index)` order; whenever the
/// schedule overruns, the scheduled job with the largest processing time
/// (smallest index on ties) is made tardy.
pub fn moore_hodgson(jobs: &[(BigInt, BigInt)]) -> TardySchedule {
    let mut order: Vec<usize> = (0..jobs.len()).collect();
    order.sort_by(|&a, &b| jobs[a].1.cmp(&jobs[b].1).then(a.cmp(&b)));
    let mut heap: BinaryHeap<(BigInt, Reverse<usize>)> = BinaryHeap::new();
    let mut time = BigInt::zero();
    let mut tardy = Vec::new();
    for j in order {
        let (p, d) = &jobs[j];
        heap.push((p.clone(), Reverse(j)));
        time += p;
        if time > *d {
            let (p, Reverse(k)) = heap.pop().expect("just pushed");
            time -= p;
            tardy.push(k);
        }
    }
    tardy.sort_unstable();
    TardySchedule {
        tardy_count: tardy.len(),
        tardy,
    }
}

/// Largest job count [`exhaustive_min_tardy`] and [`integral_lp_optimum`] accept.
pub const EXHAUSTIVE_MAX_JOBS: usize = 20;

/// Minimum tardy count by trying every on-time set in earliest-deadline order.
pub fn exhaustive_min_tardy(jobs: &[(BigInt, BigInt)]) -> Result<TardySchedule> {
    let n = jobs.len();
    if n > EXHAUSTIVE_MAX_JOBS {
        return Err(Error::Capacity(format!("{n} jobs for exhaustive search")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| jobs[a].1.cmp(&jobs[b].1).then(a.cmp(&b)));
    let mut best: Option<u64> = None;
    for mask in 0u64..(1 << n) {
        if best.is_some_and(|b| mask.count_ones() <= b.count_ones()) {
            continue;
        }
        let mut time = BigInt::zero();
        let on_time = order.iter().filter(|&&j| mask >> j & 1 == 1).all(|&j| {
            time += &jobs[j].0;
            time <= jobs[j].1
        });
        if on_time {
            best = Some(mask);
        }
    }
    let on_time = best.unwrap_or(0);
    let tardy: Vec<usize> = (0..n).filter(|j| on_time >> j & 1 == 0).collect();
    Ok(TardySchedule {
        tardy_count: tardy.len(),
        tardy,
    })
}

/// `min Σ x` over 0/1 points meeting every demand constraint, by enumeration.
pub fn integral_lp_optimum(inst: &GapInstance) -> Result<usize> {
    let n = inst.n();
    if n > EXHAUSTIVE_MAX_JOBS {
        return Err(Error::Capacity(format!(
            "{n} variables for exhaustive search"
        )));
    }
    let demands = &lp_constraints(inst, &Rational::zero())[1..];
    (0u64..(1 << n))
        .filter(|&mask| {
            let set = crate::subset_lattice::SubsetId::from_bits(mask);
            demands.iter().all(|c| !c.value_at(set).is_negative())
        })
        .map(|mask| mask.count_ones() as usize)
        .min()
        .ok_or_else(|| Error::Domain("demand constraints have no 0/1 solution".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Theorem {
    /// Uniform weight up to size `2t+1`, `t = √n/(2k) − 1/2`.
    #[serde(rename = "1")]
    One,
    /// Uniform weight up to size `t+1`, `t = √n/k − 1`.
    #[serde(rename = "2")]
    Two,
}

impl Theorem {
    pub fn from_number(x: u32) -> Result<Self> {
        match x {
            1 => Ok(Theorem::One),
            2 => Ok(Theorem::Two),
            _ => Err(Error::Parameter(format!("theorem must be 1 or 2, got {x}"))),
        }
    }

    pub fn number(self) -> u32 {
        match self {
            Theorem::One => 1,
            Theorem::Two => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateSpec {
    pub theorem: Theorem,
    pub k: usize,
    pub t: usize,
    /// Largest support cardinality.
    pub threshold: usize,
    #[serde(with = "rational_string")]
    pub alpha: Rational,
    /// `√n / k`.
    #[serde(rename = "T", with = "rational_string")]
    pub target: Rational,
}

/// Exact square root of `n`, if it has one.
pub fn exact_sqrt(n: usize) -> Option<usize> {
    let r = (n as f64).sqrt().round() as usize;
    (r.checked_mul(r) == Some(n)).then_some(r)
}

/// Certificate for `n = m²` blocks and target gap `k`.
pub fn make_certificate(
    n: usize,
    theorem: Theorem,
    k: usize,
) -> Result<(CertificateSpec, PseudoDistribution)> {
    let m = exact_sqrt(n)
        .filter(|&m| m > 0)
        .ok_or_else(|| Error::Parameter(format!("n = {n} is not a positive perfect square")))?;
    if k == 0 {
        return Err(Error::Parameter("k must be positive".into()));
    }
    let (t, threshold) = match theorem {
        Theorem::One => {
            // √n/(2k) − 1/2 = (m − k)/(2k)
            if m < k || !(m - k).is_multiple_of(2 * k) {
                return Err(Error::Parameter(format!(
                    "√n/(2k) − 1/2 = ({m} − {k})/{} is not a natural number",
                    2 * k
                )));
            }
            let t = (m - k) / (2 * k);
            (t, 2 * t + 1)
        }
        Theorem::Two => {
            if m % k != 0 {
                return Err(Error::Parameter(format!(
                    "√n/k − 1 = {m}/{k} − 1 is not a natural number"
                )));
            }
            let t = m / k - 1;
            (t, t + 1)
        }
    };
    let threshold = threshold.min(n);
    let alpha = Rational::new(BigInt::one(), BigInt::from(count_subsets(n, threshold)));
    let p = PseudoDistribution::uniform_up_to(n, threshold)?;
    let spec = CertificateSpec {
        theorem,
        k,
        t,
        threshold,
        alpha,
        target: Rational::new(BigInt::from(m), BigInt::from(k)),
    };
    Ok((spec, p))
}

/// `{10³, 10⁶, 10⁹, 10¹²}`.
pub const DEFAULT_P_LADDER: [u64; 4] = [1_000, 1_000_000, 1_000_000_000, 1_000_000_000_000];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GapStatus {
    #[serde(rename = "FEASIBLE")]
    Feasible,
    #[serde(rename = "INFEASIBLE")]
    Infeasible,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
    /// No rung of the ladder passed; says nothing against larger `P`.
    #[serde(rename = "INCONCLUSIVE-FOR-LADDER")]
    InconclusiveForLadder,
}

impl GapStatus {
    pub fn exit_code(self) -> i32 {
        match self {
            GapStatus::Feasible => 0,
            GapStatus::Infeasible => 1,
            GapStatus::Inconclusive | GapStatus::InconclusiveForLadder => 2,
        }
    }
}

impl fmt::Display for GapStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GapStatus::Feasible => "FEASIBLE",
            GapStatus::Infeasible => "INFEASIBLE",
            GapStatus::Inconclusive => "INCONCLUSIVE",
            GapStatus::InconclusiveForLadder => "INCONCLUSIVE-FOR-LADDER",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LadderAttempt {
    #[serde(rename = "P")]
    pub base: u64,
    pub overall: Overall,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapReport {
    pub m: usize,
    pub n: usize,
    pub level: usize,
    pub certificate: CertificateSpec,
    pub integral_optimum: usize,
    /// Integral optimum over `T`.
    #[serde(with = "rational_string")]
    pub gap: Rational,
    pub attempts: Vec<LadderAttempt>,
    pub passing_p: Option<u64>,
    pub status: GapStatus,
    pub statement: String,
    /// Report of the passing rung, or of the last rung tried.
    pub verification: Option<VerificationReport>,
}

/// Checks the certificate for `LP(√n/k)` on the instances `(m, P)` for `P`
/// ascending through `ladder`, stopping at the first feasible rung.
pub fn verify_gap(
    m: usize,
    spec: &CertificateSpec,
    p: &PseudoDistribution,
    level: usize,
    ladder: &[u64],
    options: &VerifyOptions,
) -> Result<GapReport> {
    if p.n() != m * m {
        return Err(Error::Parameter(format!(
            "certificate over n = {} for m = {m}",
            p.n()
        )));
    }
    if ladder.is_empty() {
        return Err(Error::Parameter("empty P ladder".into()));
    }
    let mut ladder = ladder.to_vec();
    ladder.sort_unstable();
    ladder.dedup();

    let optimum = moore_hodgson(&build_instance(m, ladder[0])?.jobs()).tardy_count;
    let mut attempts = Vec::new();
    let mut last = None;
    let mut passing = None;
    for &base in &ladder {
        let inst = build_instance(m, base)?;
        let constraints = lp_constraints(&inst, &spec.target);
        let report = verify_conditions(
            CertificateSource::Distribution(p),
            &constraints,
            level,
            options,
        )?;
        attempts.push(LadderAttempt {
            base,
            overall: report.overall,
        });
        let done = report.overall == Overall::Feasible;
        last = Some(report);
        if done {
            passing = Some(base);
            break;
        }
    }

    let all_infeasible = attempts.iter().all(|a| a.overall == Overall::Infeasible);
    let status = if passing.is_some() {
        GapStatus::Feasible
    } else if all_infeasible && level > spec.t {
        GapStatus::Infeasible
    } else if attempts.iter().any(|a| a.overall == Overall::Inconclusive) {
        GapStatus::Inconclusive
    } else {
        GapStatus::InconclusiveForLadder
    };
    let gap = Rational::from_integer(optimum.into()) / &spec.target;
    let statement = match status {
        GapStatus::Feasible => format!(
            "integrality gap {} at level {level} (P = {})",
            crate::subset_lattice::format_rational(&gap),
            passing.expect("feasible rung")
        ),
        GapStatus::Infeasible => {
            format!("certificate infeasible at level {level} for every P tried")
        }
        _ => format!("no P in the ladder certified level {level}"),
    };
    Ok(GapReport {
        m,
        n: m * m,
        level,
        certificate: spec.clone(),
        integral_optimum: optimum,
        gap,
        attempts,
        passing_p: passing,
        status,
        statement,
        verification: last,
    })
}

/// Integral and LP optima of one instance.
#[derive(Clone, Debug, Serialize)]
pub struct OptimumReport {
    pub m: usize,
    #[serde(rename = "P")]
    pub base: u64,
    pub n: usize,
    pub moore_hodgson: TardySchedule,
    pub exhaustive: Option<usize>,
    pub integral_lp: Option<usize>,
    /// `√n / P`, where the fractional point is feasible.
    #[serde(rename = "fractional_T", with = "rational_string")]
    pub fractional_t: Rational,
    pub fractional_feasible: bool,
    /// Integral optimum over the fractional `T`; equals `P` on this family.
    #[serde(with = "option_rational_string")]
    pub lp_gap: Option<Rational>,
}

pub fn optimum_report(inst: &GapInstance) -> Result<OptimumReport> {
    let jobs = inst.jobs();
    let mh = moore_hodgson(&jobs);
    let small = inst.n() <= 16;
    let exhaustive = if small {
        Some(exhaustive_min_tardy(&jobs)?.tardy_count)
    } else {
        None
    };
    let integral_lp = if small {
        Some(integral_lp_optimum(inst)?)
    } else {
        None
    };
    let (x, t) = fractional_point(inst);
    let feasible = satisfies_all(&lp_constraints(inst, &t), &x);
    let lp_gap = feasible.then(|| Rational::from_integer(mh.tardy_count.into()) / &t);
    Ok(OptimumReport {
        m: inst.m,
        base: inst.base,
        n: inst.n(),
        moore_hodgson: mh,
        exhaustive,
        integral_lp,
        fractional_t: t,
        fractional_feasible: feasible,
        lp_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psd_engine::{Method, Mode, PsdStatus};
    use crate::subset_lattice::{rat, ratio};
    use num_traits::ToPrimitive;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ints(v: &[BigInt]) -> Vec<i64> {
        v.iter().map(|x| x.to_i64().unwrap()).collect()
    }

    #[test]
    fn small_instances() {
        let inst = build_instance(2, 2).unwrap();
        let jobs = inst.jobs();
        let p: Vec<_> = jobs.iter().map(|j| j.0.clone()).collect();
        let d: Vec<_> = jobs.iter().map(|j| j.1.clone()).collect();
        assert_eq!(ints(&p), vec![2, 2, 4, 4]);
        assert_eq!(ints(&d), vec![3, 3, 9, 9]);
        assert_eq!(ints(&[inst.demand(1), inst.demand(2)]), vec![1, 3]);

        let one = build_instance(1, 2).unwrap();
        assert_eq!(one.deadline(1), BigInt::from(1));
        assert_eq!(one.demand(1), BigInt::from(1));

        assert!(build_instance(0, 2).is_err());
        assert!(build_instance(2, 1).is_err());
    }

    #[test]
    fn demand_identity_and_increasing_deadlines() {
        for m in 1..=5 {
            for base in [2, 3, 5, 10, 1000] {
                let inst = build_instance(m, base).unwrap();
                for i in 1..=m {
                    assert_eq!(inst.overload(i), inst.demand(i), "m={m} P={base} i={i}");
                    if i > 1 {
                        assert!(inst.deadline(i) > inst.deadline(i - 1));
                    }
                }
            }
        }
    }

    #[test]
    fn first_demand_constraint() {
        let inst = build_instance(2, 2).unwrap();
        let cs = lp_constraints(&inst, &rat(2));
        assert_eq!(cs.len(), 3);
        let c = &cs[1];
        assert_eq!(c.coeff(0), rat(2));
        assert_eq!(c.coeff(1), rat(2));
        assert_eq!(c.coeff(2), rat(0));
        assert_eq!(*c.rhs(), rat(1));
        assert_eq!(cs[0].evaluate(&vec![rat(1); 4]), rat(-2));
    }

    #[test]
    fn fractional_and_all_ones_points() {
        for m in 1..=5 {
            for base in [2, 10] {
                let inst = build_instance(m, base).unwrap();
                let (x, t) = fractional_point(&inst);
                assert_eq!(t, ratio(m as i64, base as i64));
                assert!(satisfies_all(&lp_constraints(&inst, &t), &x));
                let ones = vec![rat(1); inst.n()];
                assert!(satisfies_all(
                    &lp_constraints(&inst, &rat(inst.n() as i64)),
                    &ones
                ));
            }
        }
    }

    #[test]
    fn moore_hodgson_fixtures() {
        let inst = build_instance(2, 2).unwrap();
        assert_eq!(moore_hodgson(&inst.jobs()).tardy_count, 2);
        assert_eq!(exhaustive_min_tardy(&inst.jobs()).unwrap().tardy_count, 2);
        let single = vec![(BigInt::from(3), BigInt::from(5))];
        assert_eq!(moore_hodgson(&single).tardy_count, 0);
        let inst = build_instance(3, 3).unwrap();
        assert_eq!(exhaustive_min_tardy(&inst.jobs()).unwrap().tardy_count, 3);
        assert_eq!(moore_hodgson(&inst.jobs()).tardy_count, 3);
    }

    #[test]
    fn moore_hodgson_matches_exhaustive() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let n = rng.gen_range(1..=12);
            let jobs: Vec<_> = (0..n)
                .map(|_| {
                    (
                        BigInt::from(rng.gen_range(1..=10)),
                        BigInt::from(rng.gen_range(1..=30)),
                    )
                })
                .collect();
            let mh = moore_hodgson(&jobs);
            assert_eq!(
                mh.tardy_count,
                exhaustive_min_tardy(&jobs).unwrap().tardy_count
            );
            // the on-time jobs really are on time in deadline order
            let mut on_time: Vec<_> = (0..n).filter(|j| !mh.tardy.contains(j)).collect();
            on_time.sort_by(|&a, &b| jobs[a].1.cmp(&jobs[b].1));
            let mut time = BigInt::zero();
            for j in on_time {
                time += &jobs[j].0;
                assert!(time <= jobs[j].1);
            }
        }
    }

    #[test]
    fn integral_optimum_is_block_count() {
        for m in 1..=3 {
            for base in [2, 10] {
                let inst = build_instance(m, base).unwrap();
                assert_eq!(exhaustive_min_tardy(&inst.jobs()).unwrap().tardy_count, m);
                assert_eq!(integral_lp_optimum(&inst).unwrap(), m);
            }
        }
        for m in 4..=6 {
            for base in [2, 10] {
                let inst = build_instance(m, base).unwrap();
                assert_eq!(moore_hodgson(&inst.jobs()).tardy_count, m);
            }
        }
    }

    #[test]
    fn certificates() {
        let (spec, p) = make_certificate(16, Theorem::Two, 2).unwrap();
        assert_eq!((spec.t, spec.threshold), (1, 2));
        assert_eq!(spec.alpha, ratio(1, 137));
        assert!(p.is_normalized());
        let (spec, p) = make_certificate(36, Theorem::One, 2).unwrap();
        assert_eq!((spec.t, spec.threshold), (1, 3));
        assert_eq!(spec.alpha, ratio(1, 1 + 36 + 630 + 7140));
        assert!(p.is_normalized());
        assert!(matches!(
            make_certificate(16, Theorem::Two, 3),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            make_certificate(15, Theorem::Two, 1),
            Err(Error::Parameter(_))
        ));
        let (spec, _) = make_certificate(9, Theorem::One, 1).unwrap();
        assert_eq!((spec.t, spec.threshold), (1, 3));
        assert_eq!(spec.target, rat(3));
    }

    #[test]
    fn instance_json_round_trip() {
        let inst = build_instance(3, 10).unwrap();
        let text = inst.to_json().unwrap();
        assert!(text.contains("\"P\": 10"));
        assert_eq!(GapInstance::from_json(&text).unwrap(), inst);
        assert!(GapInstance::from_json("{\"m\": 2, \"P\": 1}").is_err());
    }

    #[test]
    fn small_gap_one_is_feasible() {
        let (spec, p) = make_certificate(9, Theorem::One, 1).unwrap();
        let report = verify_gap(
            3,
            &spec,
            &p,
            1,
            &DEFAULT_P_LADDER,
            &VerifyOptions::default(),
        )
        .unwrap();
        assert_eq!(report.status, GapStatus::Feasible);
        assert_eq!(report.gap, rat(1));
        assert_eq!(report.integral_optimum, 3);
    }

    #[test]
    fn one_level_up_is_infeasible_by_diagonal_witness() {
        let (spec, p) = make_certificate(16, Theorem::Two, 2).unwrap();
        let report = verify_gap(
            4,
            &spec,
            &p,
            2,
            &[1000],
            &VerifyOptions::with_mode(Mode::Exact),
        )
        .unwrap();
        assert_eq!(report.status, GapStatus::Infeasible);
        let v = report.verification.unwrap();
        let bad: Vec<_> = v
            .condition3
            .iter()
            .filter(|c| c.matrix.verdict.status == PsdStatus::NotPsd)
            .collect();
        assert!(!bad.is_empty());
        assert!(bad
            .iter()
            .all(|c| c.matrix.verdict.method == Method::Diagonal));
        assert!(bad.iter().all(|c| c
            .matrix
            .verdict
            .witness_value
            .as_ref()
            .unwrap()
            .is_negative()));
    }
}
