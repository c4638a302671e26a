//! Batch entry point. Every subcommand writes a JSON report (default
//! `<subcommand>.json`) and prints a short summary on stdout.
//!
//! Exit codes: 0 pass / FEASIBLE, 1 fail / INFEASIBLE, 2 INCONCLUSIVE,
//! 3 usage or parameter error (nothing written).

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyopt_gap::{default_eps_ladder, verify_polyopt};
use crate::psd_engine::{exact_psd, numeric_psd, Mode, PsdStatus, VerifyOptions};
use crate::pseudomoments::{
    constraint_moment_matrix, constraint_moments, moment_matrix, pushforward, zeta_sum_matrix,
    LinearConstraint,
};
use crate::subset_lattice::{
    enumerate_subsets, format_rational, mobius_transform, parse_rational, ratio, zeta_transform,
    PseudoDistribution, Rational, SubsetId,
};
use crate::tardy_gap::{
    build_instance, exact_sqrt, exhaustive_min_tardy, make_certificate, moore_hodgson,
    optimum_report, verify_gap, GapStatus, Theorem, DEFAULT_P_LADDER,
};
use crate::zeta_algebra::{check_shift, invert_shifted_zeta, ShiftCheck};

#[derive(Parser, Debug)]
#[command(
    name = "lasgap",
    version,
    about = "Lasserre hierarchy gap certificates, checked exactly"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the shifted zeta inverse identities and the closed form.
    VerifyZeta(VerifyZetaArgs),
    /// Write a scheduling gap instance as {"m", "P"}.
    GenInstance(InstanceArgs),
    /// Check a uniform certificate against the covering LP relaxation.
    TardyVerify(TardyArgs),
    /// Integral and fractional optima of one scheduling instance.
    TardyOpt(InstanceArgs),
    /// Smallest P on a ladder for which the certificate verifies.
    MinPSearch(TardyArgs),
    /// Check the degree-k polynomial gap certificate over an ε ladder.
    PolyoptVerify(PolyoptArgs),
    /// Randomized comparison of independent computation paths.
    OracleCompare(OracleArgs),
}

#[derive(Args, Debug)]
struct Output {
    /// Report path [default: <subcommand>.json]
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyZetaArgs {
    #[arg(long, value_parser = parse_count)]
    n: usize,
    #[arg(long, value_parser = parse_count)]
    d: usize,
    /// Check every S ⊆ [n] instead of S = ∅ (or --shift).
    #[arg(long)]
    all_shifts: bool,
    /// Comma-separated 1-based labels of S.
    #[arg(long, value_parser = parse_labels, conflicts_with = "all_shifts")]
    shift: Option<SubsetId>,
    /// Dump the inverse for the chosen shift as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct InstanceArgs {
    /// Number of jobs, a perfect square.
    #[arg(long, value_parser = parse_count)]
    n: Option<usize>,
    /// Number of blocks.
    #[arg(long, value_parser = parse_count)]
    m: Option<usize>,
    #[arg(long = "p-base", value_parser = parse_base, default_value = "2")]
    p_base: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct TardyArgs {
    #[arg(long, value_parser = parse_count)]
    n: Option<usize>,
    #[arg(long, value_parser = parse_count)]
    m: Option<usize>,
    #[arg(long, value_parser = parse_count)]
    k: usize,
    #[arg(long, value_parser = parse_count, default_value = "2")]
    theorem: usize,
    /// Hierarchy level [default: the certificate's own level]
    #[arg(long, value_parser = parse_count)]
    level: Option<usize>,
    #[arg(long, value_parser = parse_mode, default_value = "auto")]
    mode: Mode,
    /// Comma-separated values of P.
    #[arg(long = "p-ladder", value_parser = parse_p_ladder)]
    p_ladder: Option<Vec<u64>>,
    /// Factor every matrix instead of using the termwise and diagonal shortcuts.
    #[arg(long)]
    no_fast_path: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct PolyoptArgs {
    #[arg(long, value_parser = parse_count)]
    n: usize,
    #[arg(long, value_parser = parse_count)]
    k: usize,
    /// Comma-separated ε values, tried largest first.
    #[arg(long = "eps-ladder", value_parser = parse_eps_ladder)]
    eps_ladder: Option<Vec<Rational>>,
    #[arg(long, value_parser = parse_mode, default_value = "exact")]
    mode: Mode,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long, value_parser = parse_count, default_value = "0")]
    seed: usize,
    /// Random cases per comparison.
    #[arg(long, value_parser = parse_count, default_value = "100")]
    count: usize,
    /// Largest ground set for random pseudo-distributions.
    #[arg(long, value_parser = parse_count, default_value = "8")]
    n: usize,
    #[command(flatten)]
    output: Output,
}

fn parse_count(s: &str) -> std::result::Result<usize, String> {
    let r = parse_rational(s).map_err(|e| e.to_string())?;
    if !r.is_integer() || r.is_negative() {
        return Err(format!("{s} is not a non-negative integer"));
    }
    r.to_integer()
        .to_usize()
        .ok_or_else(|| format!("{s} is too large"))
}

fn parse_base(s: &str) -> std::result::Result<u64, String> {
    let r = parse_rational(s).map_err(|e| e.to_string())?;
    if !r.is_integer() {
        return Err(format!("{s} is not an integer"));
    }
    r.to_integer()
        .to_u64()
        .ok_or_else(|| format!("{s} is out of range"))
}

fn parse_p_ladder(s: &str) -> std::result::Result<Vec<u64>, String> {
    s.split(',').map(|x| parse_base(x.trim())).collect()
}

fn parse_eps_ladder(s: &str) -> std::result::Result<Vec<Rational>, String> {
    s.split(',')
        .map(|x| parse_rational(x.trim()).map_err(|e| e.to_string()))
        .collect()
}

fn parse_mode(s: &str) -> std::result::Result<Mode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_labels(s: &str) -> std::result::Result<SubsetId, String> {
    let labels = s
        .split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.trim().parse::<usize>().map_err(|e| e.to_string()))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    SubsetId::from_labels(labels).map_err(|e| e.to_string())
}

struct Outcome {
    code: i32,
    report: serde_json::Value,
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
        }
    };
    let (name, out) = match &cli.command {
        Command::VerifyZeta(a) => ("verify-zeta", &a.output.out),
        Command::GenInstance(a) => ("gen-instance", &a.output.out),
        Command::TardyVerify(a) => ("tardy-verify", &a.output.out),
        Command::TardyOpt(a) => ("tardy-opt", &a.output.out),
        Command::MinPSearch(a) => ("min-p-search", &a.output.out),
        Command::PolyoptVerify(a) => ("polyopt-verify", &a.output.out),
        Command::OracleCompare(a) => ("oracle-compare", &a.output.out),
    };
    let path = out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{name}.json")));
    let result = match &cli.command {
        Command::VerifyZeta(a) => verify_zeta(a),
        Command::GenInstance(a) => gen_instance(a),
        Command::TardyVerify(a) => tardy_verify(a, &DEFAULT_P_LADDER),
        Command::TardyOpt(a) => tardy_opt(a),
        Command::MinPSearch(a) => tardy_verify(a, &search_ladder()),
        Command::PolyoptVerify(a) => polyopt(a),
        Command::OracleCompare(a) => oracle_compare(a),
    };
    match result.and_then(|o| write_report(&path, &o.report).map(|_| o.code)) {
        Ok(code) => {
            println!("report: {}", path.display());
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            3
        }
    }
}

fn write_report(path: &Path, report: &serde_json::Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

fn to_value<T: Serialize>(x: &T) -> Result<serde_json::Value> {
    Ok(serde_json::to_value(x)?)
}

/// `10, 10², …, 10¹²`.
fn search_ladder() -> Vec<u64> {
    (1..=12).map(|e| 10u64.pow(e)).collect()
}

fn blocks(n: Option<usize>, m: Option<usize>) -> Result<usize> {
    match (n, m) {
        (None, None) => Err(Error::Parameter("give --n or --m".into())),
        (Some(n), m) => {
            let root = exact_sqrt(n)
                .ok_or_else(|| Error::Parameter(format!("n = {n} is not a perfect square")))?;
            if m.is_some_and(|m| m != root) {
                return Err(Error::Parameter(format!("--n {n} and --m disagree")));
            }
            Ok(root)
        }
        (None, Some(m)) => Ok(m),
    }
}

fn verify_zeta(a: &VerifyZetaArgs) -> Result<Outcome> {
    if a.n > 12 {
        return Err(Error::Parameter(format!("n = {} above 12", a.n)));
    }
    let shift = a.shift.unwrap_or(SubsetId::EMPTY);
    if !shift.fits(a.n) {
        return Err(Error::Parameter(format!("shift {shift} outside [{}]", a.n)));
    }
    let shifts: Vec<SubsetId> = if a.all_shifts {
        (0..1u64 << a.n).map(SubsetId::from_bits).collect()
    } else {
        vec![shift]
    };
    let checks: Vec<ShiftCheck> = shifts
        .iter()
        .map(|&s| check_shift(a.n, a.d, s))
        .collect::<Result<_>>()?;
    if let Some(path) = &a.csv {
        let inv = invert_shifted_zeta(a.n, a.d, shift)?;
        let labels = enumerate_subsets(a.n, a.d)?;
        inv.write_csv(&labels, std::fs::File::create(path)?)?;
    }
    let failed: Vec<&ShiftCheck> = checks.iter().filter(|c| !c.passed()).collect();
    let pass = failed.is_empty();
    println!(
        "verify-zeta n={} d={}: {} shift(s), {} failed",
        a.n,
        a.d,
        checks.len(),
        failed.len()
    );
    #[derive(Serialize)]
    struct Report<'a> {
        n: usize,
        d: usize,
        dimension: usize,
        shifts_checked: usize,
        failures: Vec<&'a ShiftCheck>,
        pass: bool,
    }
    Ok(Outcome {
        code: if pass { 0 } else { 1 },
        report: to_value(&Report {
            n: a.n,
            d: a.d,
            dimension: enumerate_subsets(a.n, a.d)?.len(),
            shifts_checked: checks.len(),
            failures: failed,
            pass,
        })?,
    })
}

fn gen_instance(a: &InstanceArgs) -> Result<Outcome> {
    let inst = build_instance(blocks(a.n, a.m)?, a.p_base)?;
    for i in 1..=inst.m {
        println!(
            "block {i}: p = {}, d = {}, D = {}",
            inst.processing(i),
            inst.deadline(i),
            inst.demand(i)
        );
    }
    Ok(Outcome {
        code: 0,
        report: to_value(&inst)?,
    })
}

fn tardy_opt(a: &InstanceArgs) -> Result<Outcome> {
    let inst = build_instance(blocks(a.n, a.m)?, a.p_base)?;
    let r = optimum_report(&inst)?;
    let mh = r.moore_hodgson.tardy_count;
    let consistent = r.exhaustive.is_none_or(|e| e == mh)
        && r.integral_lp.is_none_or(|e| e == mh)
        && r.fractional_feasible;
    println!(
        "m={} P={}: integral optimum {mh}, fractional point feasible at T = {}",
        inst.m,
        inst.base,
        format_rational(&r.fractional_t)
    );
    Ok(Outcome {
        code: if consistent { 0 } else { 1 },
        report: to_value(&r)?,
    })
}

fn tardy_verify(a: &TardyArgs, default_ladder: &[u64]) -> Result<Outcome> {
    let m = blocks(a.n, a.m)?;
    let theorem = Theorem::from_number(a.theorem as u32)?;
    let (spec, p) = make_certificate(m * m, theorem, a.k)?;
    let level = a.level.unwrap_or(spec.t);
    let options = VerifyOptions {
        condition2_fast_path: !a.no_fast_path,
        constraint_fast_paths: !a.no_fast_path,
        ..VerifyOptions::with_mode(a.mode)
    };
    let ladder = a.p_ladder.as_deref().unwrap_or(default_ladder);
    let report = verify_gap(m, &spec, &p, level, ladder, &options)?;
    for att in &report.attempts {
        println!("P = {}: {:?}", att.base, att.overall);
    }
    println!("{}: {}", report.status, report.statement);
    Ok(Outcome {
        code: report.status.exit_code(),
        report: to_value(&report)?,
    })
}

fn polyopt(a: &PolyoptArgs) -> Result<Outcome> {
    let ladder = a.eps_ladder.clone().unwrap_or_else(default_eps_ladder);
    let report = verify_polyopt(a.n, a.k, &ladder, &VerifyOptions::with_mode(a.mode))?;
    println!("{}: {}", report.status, report.statement);
    let code = match report.status {
        GapStatus::Feasible => 0,
        GapStatus::Infeasible => 1,
        _ => 2,
    };
    Ok(Outcome {
        code,
        report: to_value(&report)?,
    })
}

#[derive(Default, Serialize)]
struct Comparison {
    name: &'static str,
    cases: usize,
    mismatches: usize,
    /// Cases the numeric side left undecided.
    #[serde(skip_serializing_if = "is_zero")]
    inconclusive: usize,
}

fn is_zero(x: &usize) -> bool {
    *x == 0
}

fn random_distribution(rng: &mut ChaCha8Rng, max_n: usize) -> Result<PseudoDistribution> {
    let n = rng.gen_range(1..=max_n.max(1));
    let size = rng.gen_range(1..=8);
    let weights: Vec<_> = (0..size)
        .map(|_| {
            (
                SubsetId::from_bits(rng.gen_range(0..1u64 << n)),
                ratio(rng.gen_range(-6..=9), rng.gen_range(1..=5)),
            )
        })
        .collect();
    PseudoDistribution::from_weights(n, weights)
}

fn random_constraint(rng: &mut ChaCha8Rng, n: usize) -> LinearConstraint {
    let coeffs: Vec<_> = (0..n)
        .map(|v| (v, ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3))))
        .collect();
    LinearConstraint::greater_equal(coeffs, ratio(rng.gen_range(-3..=3), rng.gen_range(1..=2)))
}

fn oracle_compare(a: &OracleArgs) -> Result<Outcome> {
    if a.n > 10 {
        return Err(Error::Parameter(format!("--n {} above 10", a.n)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed as u64);
    let mut moment_form = Comparison {
        name: "zeta sum vs moment form",
        ..Default::default()
    };
    let mut push = Comparison {
        name: "pushforward moments vs constraint moments",
        ..Default::default()
    };
    let mut mobius = Comparison {
        name: "mobius after zeta",
        ..Default::default()
    };
    let mut psd = Comparison {
        name: "exact vs numeric PSD",
        ..Default::default()
    };
    let mut tardy = Comparison {
        name: "moore-hodgson vs exhaustive",
        ..Default::default()
    };

    for _ in 0..a.count {
        let p = random_distribution(&mut rng, a.n)?;
        let n = p.n();
        let t = rng.gen_range(0..=2usize);
        let c = random_constraint(&mut rng, n);
        let y = zeta_transform(&p, t + 1);

        moment_form.cases += 1;
        let same = zeta_sum_matrix(&p, None, t)? == moment_matrix(&zeta_transform(&p, t), t)?
            && zeta_sum_matrix(&p, Some(&c), t)? == constraint_moment_matrix(&y, &c, t)?;
        moment_form.mismatches += usize::from(!same);

        push.cases += 1;
        let z = zeta_transform(&pushforward(&p, &c)?, t);
        let direct = constraint_moments(&y, &c, t)?;
        let same = enumerate_subsets(n, 2 * t)?
            .into_iter()
            .try_fold(true, |acc, s| {
                Ok::<_, Error>(acc && z.get(s)? == direct.get(s)?)
            })?;
        push.mismatches += usize::from(!same);

        mobius.cases += 1;
        let back = mobius_transform(&zeta_transform(&p, n))?;
        let same = enumerate_subsets(n, n)?
            .into_iter()
            .all(|s| back.weight(s) == p.weight(s));
        mobius.mismatches += usize::from(!same);

        psd.cases += 1;
        let m = zeta_sum_matrix(&p, Some(&c), t)?;
        let exact = exact_psd(&m)?;
        let numeric = numeric_psd(&m.to_float()?, Some(&m))?;
        match numeric.status {
            PsdStatus::Inconclusive => psd.inconclusive += 1,
            s => psd.mismatches += usize::from(s != exact.status),
        }

        tardy.cases += 1;
        let jobs: Vec<_> = (0..rng.gen_range(1..=10))
            .map(|_| {
                (
                    rng.gen_range(1..=9u32).into(),
                    rng.gen_range(1..=25u32).into(),
                )
            })
            .collect();
        let same = moore_hodgson(&jobs).tardy_count == exhaustive_min_tardy(&jobs)?.tardy_count;
        tardy.mismatches += usize::from(!same);
    }

    let comparisons = [moment_form, push, mobius, psd, tardy];
    for c in &comparisons {
        println!("{}: {}/{} agree", c.name, c.cases - c.mismatches, c.cases);
    }
    let pass = comparisons.iter().all(|c| c.mismatches == 0);
    #[derive(Serialize)]
    struct Report<'a> {
        seed: usize,
        count: usize,
        max_n: usize,
        comparisons: &'a [Comparison],
        pass: bool,
    }
    Ok(Outcome {
        code: if pass { 0 } else { 1 },
        report: to_value(&Report {
            seed: a.seed,
            count: a.count,
            max_n: a.n,
            comparisons: &comparisons,
            pass,
        })?,
    })
}
