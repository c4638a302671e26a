//! Unconstrained 0/1 maximization of a degree-`k` multilinear polynomial
//! whose level-`(k−1)` relaxation exceeds the integral optimum.
//!
//! `f(x) = Σ_{1<=|I|<=k} C(n−|I|, k−|I|) (−1)^{|I|+1} Π_{i∈I} x_i` counts the
//! `k`-sets hit by the ones of `x`, so its maximum is `C(n, k)`. The
//! certificate puts `−ε` on `∅` and `(1+ε)/Σ_{s>n−k} C(n, s)` on every set of
//! size above `n − k`, where `f` is already maximal.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::diagonalizer::partial_diagonalize;
use crate::error::{Error, Result};
use crate::psd_engine::{
    verify_unconstrained, CertificateSource, Overall, VerificationReport, VerifyOptions,
};
use crate::subset_lattice::{
    binomial_big, enumerate_subsets, format_rational, minus_one_pow, rational_string,
    PseudoDistribution, Rational, SubsetId,
};
use crate::tardy_gap::GapStatus;

#[derive(Clone, Debug, PartialEq)]
pub struct MultilinearPolynomial {
    n: usize,
    coeffs: BTreeMap<SubsetId, Rational>,
}

impl MultilinearPolynomial {
    pub fn from_coeffs<I>(n: usize, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (SubsetId, Rational)>,
    {
        let mut map: BTreeMap<SubsetId, Rational> = BTreeMap::new();
        for (s, c) in coeffs {
            if !s.fits(n) {
                return Err(Error::Domain(format!("monomial {s} outside [{n}]")));
            }
            *map.entry(s).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(MultilinearPolynomial { n, coeffs: map })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, monomial: SubsetId) -> Rational {
        self.coeffs
            .get(&monomial)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<SubsetId, Rational> {
        &self.coeffs
    }

    /// `f(x_I)`: the sum of the coefficients of monomials inside `I`.
    pub fn evaluate(&self, set: SubsetId) -> Rational {
        self.coeffs
            .iter()
            .filter(|(m, _)| m.is_subset_of(set))
            .map(|(_, c)| c)
            .sum()
    }
}

pub fn build_objective(n: usize, k: usize) -> Result<MultilinearPolynomial> {
    if k == 0 || k > n {
        return Err(Error::Parameter(format!(
            "need 1 <= k <= n, got k = {k}, n = {n}"
        )));
    }
    let terms = enumerate_subsets(n, k)?.into_iter().skip(1).map(|s| {
        let c = binomial_big((n - s.len()) as u64, (k - s.len()) as u64);
        (s, -minus_one_pow(s.len()) * Rational::from_integer(c))
    });
    MultilinearPolynomial::from_coeffs(n, terms.collect::<Vec<_>>())
}

/// Largest ground set [`maximize`] will enumerate.
pub const MAXIMIZE_MAX_N: usize = 20;

/// Maximum of `f` over `{0,1}^n`, with the first maximizer in canonical order.
pub fn maximize(f: &MultilinearPolynomial) -> Result<(Rational, SubsetId)> {
    let n = f.n();
    if n > MAXIMIZE_MAX_N {
        return Err(Error::Capacity(format!(
            "2^{n} points exceed the enumeration limit 2^{MAXIMIZE_MAX_N}"
        )));
    }
    // subset-sum transform: value[x] = Σ_{I ⊆ x} c_I
    let mut value = vec![Rational::zero(); 1 << n];
    for (m, c) in f.coeffs() {
        value[m.bits() as usize] = c.clone();
    }
    for i in 0..n {
        let bit = 1usize << i;
        for x in 0..value.len() {
            if x & bit != 0 && !value[x ^ bit].is_zero() {
                let add = value[x ^ bit].clone();
                value[x] += add;
            }
        }
    }
    let mut best: Option<(Rational, SubsetId)> = None;
    for (x, v) in value.into_iter().enumerate() {
        let s = SubsetId::from_bits(x as u64);
        let better = match &best {
            None => true,
            Some((bv, bs)) => v > *bv || (v == *bv && s < *bs),
        };
        if better {
            best = Some((v, s));
        }
    }
    Ok(best.expect("at least the empty point"))
}

/// Brute-force optimum of the degree-`k` objective on `n` variables.
pub fn integral_optimum(n: usize, k: usize) -> Result<Rational> {
    Ok(maximize(&build_objective(n, k)?)?.0)
}

/// `−ε` on `∅`, `α = (1+ε)/Σ_{s=n−k+1}^{n} C(n, s)` on each set of size `> n − k`.
pub fn make_certificate(n: usize, k: usize, eps: &Rational) -> Result<PseudoDistribution> {
    if k == 0 || k > n {
        return Err(Error::Parameter(format!(
            "need 1 <= k <= n, got k = {k}, n = {n}"
        )));
    }
    if eps.is_negative() {
        return Err(Error::Parameter("ε must be non-negative".into()));
    }
    let count: BigInt = (n - k + 1..=n)
        .map(|s| binomial_big(n as u64, s as u64))
        .sum();
    let alpha = (Rational::one() + eps) / Rational::from_integer(count);
    let mut profile = vec![Rational::zero(); n + 1];
    profile[0] = -eps.clone();
    for w in &mut profile[n - k + 1..] {
        *w = alpha.clone();
    }
    PseudoDistribution::by_size(n, profile)
}

/// `Σ_I f(x_I) y_I` over the support.
pub fn pseudo_objective(p: &PseudoDistribution, f: &MultilinearPolynomial) -> Result<Rational> {
    if p.n() != f.n() {
        return Err(Error::Domain(format!(
            "distribution over n = {} against polynomial over n = {}",
            p.n(),
            f.n()
        )));
    }
    Ok(p.support()?
        .into_iter()
        .map(|(s, y)| f.evaluate(s) * y)
        .sum())
}

/// `2^{-4}, 2^{-6}, …, 2^{-40}`.
pub fn default_eps_ladder() -> Vec<Rational> {
    (2..=20)
        .map(|e| Rational::new(BigInt::one(), BigInt::one() << (2 * e)))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct EpsAttempt {
    #[serde(with = "rational_string")]
    pub eps: Rational,
    pub overall: Overall,
}

/// Cross-check through the shifted collection `S = [n]`, `d = k − 1`.
#[derive(Clone, Debug, Serialize)]
pub struct DiagonalCheck {
    /// `D = α I`.
    pub scalar_diagonal: bool,
    /// The only remainder term is `−ε` on `∅`.
    pub single_remainder: bool,
    #[serde(with = "rational_string")]
    pub remainder_norm_squared: Rational,
    #[serde(with = "rational_string")]
    pub weyl_lower_bound: Rational,
    #[serde(with = "rational_string")]
    pub envelope_lower_bound: Rational,
    /// Weyl bound `>= 0` exactly when the factorization says PSD.
    pub agrees_with_factorization: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PolyoptReport {
    pub n: usize,
    pub k: usize,
    pub level: usize,
    #[serde(with = "rational_string")]
    pub integral_optimum: Rational,
    pub attempts: Vec<EpsAttempt>,
    #[serde(serialize_with = "serialize_opt")]
    pub passing_eps: Option<Rational>,
    #[serde(serialize_with = "serialize_opt")]
    pub pseudo_value: Option<Rational>,
    /// `ε · C(n, k)`.
    #[serde(serialize_with = "serialize_opt")]
    pub superoptimality: Option<Rational>,
    pub diagonal_check: Option<DiagonalCheck>,
    pub status: GapStatus,
    pub statement: String,
    pub verification: Option<VerificationReport>,
}

fn serialize_opt<S: serde::Serializer>(
    r: &Option<Rational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    crate::subset_lattice::option_rational_string::serialize(r, s)
}

/// Descends `ladder` (largest ε first) until the level-`(k−1)` conditions
/// pass, then checks the passing certificate through the diagonalizer.
pub fn verify_polyopt(
    n: usize,
    k: usize,
    ladder: &[Rational],
    options: &VerifyOptions,
) -> Result<PolyoptReport> {
    let f = build_objective(n, k)?;
    let (optimum, _) = maximize(&f)?;
    let t = k - 1;
    let mut ladder = ladder.to_vec();
    ladder.sort_by(|a, b| b.cmp(a));
    ladder.dedup();

    let mut attempts = Vec::new();
    let mut passing = None;
    let mut last = None;
    for eps in ladder {
        let p = make_certificate(n, k, &eps)?;
        let report = verify_unconstrained(CertificateSource::Distribution(&p), t, options)?;
        attempts.push(EpsAttempt {
            eps: eps.clone(),
            overall: report.overall,
        });
        let done = report.overall == Overall::Feasible;
        last = Some(report);
        if done {
            passing = Some((eps, p));
            break;
        }
    }

    let Some((eps, p)) = passing else {
        let inconclusive = attempts.iter().any(|a| a.overall == Overall::Inconclusive);
        return Ok(PolyoptReport {
            n,
            k,
            level: t,
            integral_optimum: optimum,
            attempts,
            passing_eps: None,
            pseudo_value: None,
            superoptimality: None,
            diagonal_check: None,
            status: if inconclusive {
                GapStatus::Inconclusive
            } else {
                GapStatus::InconclusiveForLadder
            },
            statement: format!("no ε in the ladder passes level {t}"),
            verification: last,
        });
    };

    let value = pseudo_objective(&p, &f)?;
    let margin = &eps * Rational::from_integer(binomial_big(n as u64, k as u64));
    let check = diagonal_check(&p, &eps, n, t)?;
    Ok(PolyoptReport {
        n,
        k,
        level: t,
        statement: format!(
            "level {t} value {} exceeds integral optimum {} (ε = {})",
            format_rational(&value),
            format_rational(&optimum),
            format_rational(&eps)
        ),
        integral_optimum: optimum,
        attempts,
        passing_eps: Some(eps),
        pseudo_value: Some(value),
        superoptimality: Some(margin),
        diagonal_check: Some(check),
        status: GapStatus::Feasible,
        verification: last,
    })
}

fn diagonal_check(
    p: &PseudoDistribution,
    eps: &Rational,
    n: usize,
    t: usize,
) -> Result<DiagonalCheck> {
    let res = partial_diagonalize(p, None, t, SubsetId::full(n))?;
    let alpha = &res.diagonal[0];
    let scalar_diagonal = res.diagonal.iter().all(|x| x == alpha);
    let single_remainder = res.remainder.len() == 1
        && res.remainder[0].set == SubsetId::EMPTY
        && res.remainder[0].weight == -eps.clone();
    let remainder_norm_squared = res
        .remainder
        .iter()
        .map(|r| r.vector.iter().map(|x| x * x).sum::<Rational>())
        .sum();
    let weyl = res.weyl_lower_bound();
    Ok(DiagonalCheck {
        scalar_diagonal,
        single_remainder,
        remainder_norm_squared,
        envelope_lower_bound: res.envelope_lower_bound(),
        agrees_with_factorization: !weyl.is_negative(),
        weyl_lower_bound: weyl,
    })
}
