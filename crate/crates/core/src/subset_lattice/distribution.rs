use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{
    binomial, binomial_big, check_ground_set, count_subsets, enumerate_subsets, rational_string,
    Rational, SubsetId, MAX_ENUMERATION,
};
use crate::error::{Error, Result};

/// Signed weights `y^n_I` over subsets of `[n]`.
///
/// Either an explicit sparse map or a size profile, where every subset of
/// cardinality `s` carries weight `profile[s]`. Missing entries are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct PseudoDistribution {
    n: usize,
    weights: Weights,
}

#[derive(Clone, Debug, PartialEq)]
enum Weights {
    Sparse(BTreeMap<SubsetId, Rational>),
    BySize(Vec<Rational>),
}

impl PseudoDistribution {
    pub fn from_weights<I>(n: usize, weights: I) -> Result<Self>
    where
        I: IntoIterator<Item = (SubsetId, Rational)>,
    {
        check_ground_set(n)?;
        let mut map: BTreeMap<SubsetId, Rational> = BTreeMap::new();
        for (s, w) in weights {
            if !s.fits(n) {
                return Err(Error::Domain(format!("{s} is not a subset of [{n}]")));
            }
            *map.entry(s).or_insert_with(Rational::zero) += w;
        }
        map.retain(|_, w| !w.is_zero());
        Ok(PseudoDistribution {
            n,
            weights: Weights::Sparse(map),
        })
    }

    pub fn point_mass(n: usize, set: SubsetId) -> Result<Self> {
        Self::from_weights(n, [(set, Rational::one())])
    }

    /// Size-symmetric weights: every set of cardinality `s` gets `profile[s]`.
    pub fn by_size(n: usize, mut profile: Vec<Rational>) -> Result<Self> {
        check_ground_set(n)?;
        if profile.len() > n + 1 && profile[n + 1..].iter().any(|w| !w.is_zero()) {
            return Err(Error::Domain(format!(
                "size profile has weight above cardinality {n}"
            )));
        }
        profile.truncate(n + 1);
        while profile.last().is_some_and(|w| w.is_zero()) {
            profile.pop();
        }
        Ok(PseudoDistribution {
            n,
            weights: Weights::BySize(profile),
        })
    }

    /// Uniform weight on `P_smax(n)`, normalised to total mass one.
    pub fn uniform_up_to(n: usize, smax: usize) -> Result<Self> {
        check_ground_set(n)?;
        let alpha = Rational::new(1.into(), count_subsets(n, smax).into());
        Self::by_size(n, vec![alpha; smax.min(n) + 1])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight(&self, s: SubsetId) -> Rational {
        match &self.weights {
            Weights::Sparse(m) => m.get(&s).cloned().unwrap_or_else(Rational::zero),
            Weights::BySize(p) => {
                if s.fits(self.n) {
                    p.get(s.len()).cloned().unwrap_or_else(Rational::zero)
                } else {
                    Rational::zero()
                }
            }
        }
    }

    pub fn size_profile(&self) -> Option<&[Rational]> {
        match &self.weights {
            Weights::BySize(p) => Some(p),
            Weights::Sparse(_) => None,
        }
    }

    pub fn total_mass(&self) -> Rational {
        match &self.weights {
            Weights::Sparse(m) => m.values().sum(),
            Weights::BySize(p) => p
                .iter()
                .enumerate()
                .map(|(s, w)| w * Rational::from_integer(binomial_big(self.n as u64, s as u64)))
                .sum(),
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.total_mass().is_one()
    }

    /// Number of subsets with non-zero weight.
    pub fn support_len(&self) -> u128 {
        match &self.weights {
            Weights::Sparse(m) => m.len() as u128,
            Weights::BySize(p) => p
                .iter()
                .enumerate()
                .filter(|(_, w)| !w.is_zero())
                .map(|(s, _)| binomial(self.n, s) as u128)
                .sum(),
        }
    }

    /// Largest cardinality carrying non-zero weight.
    pub fn max_support_cardinality(&self) -> Option<usize> {
        match &self.weights {
            Weights::Sparse(m) => m.keys().map(|s| s.len()).max(),
            Weights::BySize(p) => p.iter().rposition(|w| !w.is_zero()),
        }
    }

    pub fn all_weights_nonnegative(&self) -> bool {
        match &self.weights {
            Weights::Sparse(m) => m.values().all(|w| !w.is_negative()),
            Weights::BySize(p) => p.iter().all(|w| !w.is_negative()),
        }
    }

    /// Explicit `(set, weight)` list of the support in canonical order.
    pub fn support(&self) -> Result<Vec<(SubsetId, Rational)>> {
        match &self.weights {
            Weights::Sparse(m) => Ok(m.iter().map(|(s, w)| (*s, w.clone())).collect()),
            Weights::BySize(p) => {
                let len = self.support_len();
                if len > MAX_ENUMERATION {
                    return Err(Error::Capacity(format!(
                        "support of {len} sets is too large to enumerate"
                    )));
                }
                let top = p.len().saturating_sub(1);
                Ok(enumerate_subsets(self.n, top)?
                    .into_iter()
                    .filter_map(|s| {
                        let w = &p[s.len()];
                        (!w.is_zero()).then(|| (s, w.clone()))
                    })
                    .collect())
            }
        }
    }

    pub fn to_sparse(&self) -> Result<Self> {
        Self::from_weights(self.n, self.support()?)
    }

    pub fn to_json(&self) -> Result<String> {
        let weights = self
            .support()?
            .into_iter()
            .map(|(s, value)| WeightJson {
                set: s.labels(),
                value,
            })
            .collect();
        Ok(serde_json::to_string_pretty(&DistributionJson {
            n: self.n,
            weights,
        })?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: DistributionJson = serde_json::from_str(text)?;
        let mut weights = Vec::with_capacity(raw.weights.len());
        for w in raw.weights {
            if let Some(&bad) = w.set.iter().find(|&&l| l == 0 || l > raw.n) {
                return Err(Error::Domain(format!("label {bad} outside 1..={}", raw.n)));
            }
            weights.push((SubsetId::from_labels(w.set)?, w.value));
        }
        Self::from_weights(raw.n, weights)
    }
}

#[derive(Serialize, Deserialize)]
struct DistributionJson {
    n: usize,
    weights: Vec<WeightJson>,
}

#[derive(Serialize, Deserialize)]
struct WeightJson {
    set: Vec<usize>,
    #[serde(with = "rational_string")]
    value: Rational,
}

/// Standard moments `y_I` for `|I| <= 2d`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentVector {
    n: usize,
    order: usize,
    values: Moments,
}

#[derive(Clone, Debug, PartialEq)]
enum Moments {
    Sparse(HashMap<SubsetId, Rational>),
    BySize(Vec<Rational>),
}

impl MomentVector {
    /// Explicit moments; absent sets with `|I| <= 2d` read as zero.
    pub fn from_values(
        n: usize,
        order: usize,
        values: HashMap<SubsetId, Rational>,
    ) -> Result<Self> {
        check_ground_set(n)?;
        let max = (2 * order).min(n);
        if let Some(s) = values.keys().find(|s| !s.fits(n) || s.len() > max) {
            return Err(Error::Domain(format!("moment {s} outside P_{max}({n})")));
        }
        Ok(MomentVector {
            n,
            order,
            values: Moments::Sparse(values),
        })
    }

    /// Moments depending only on `|I|`: `y_I = by_size[|I|]`.
    pub fn by_size(n: usize, order: usize, mut by_size: Vec<Rational>) -> Result<Self> {
        check_ground_set(n)?;
        let max = (2 * order).min(n);
        by_size.resize(max + 1, Rational::zero());
        Ok(MomentVector {
            n,
            order,
            values: Moments::BySize(by_size),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Truncation order `d`; moments are defined for `|I| <= 2d`.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn max_cardinality(&self) -> usize {
        (2 * self.order).min(self.n)
    }

    pub fn get(&self, s: SubsetId) -> Result<Rational> {
        if s.len() > self.max_cardinality() || !s.fits(self.n) {
            return Err(Error::Domain(format!(
                "moment y_{s} not available (order {}, n = {})",
                self.order, self.n
            )));
        }
        Ok(match &self.values {
            Moments::Sparse(m) => m.get(&s).cloned().unwrap_or_else(Rational::zero),
            Moments::BySize(v) => v[s.len()].clone(),
        })
    }

    pub fn size_profile(&self) -> Option<&[Rational]> {
        match &self.values {
            Moments::BySize(v) => Some(v),
            Moments::Sparse(_) => None,
        }
    }

    /// `y_∅`.
    pub fn total(&self) -> Rational {
        self.get(SubsetId::EMPTY).expect("y_∅ always present")
    }
}

/// `y_I = Σ_{H ⊇ I} p_H` for every `|I| <= 2d`.
pub fn zeta_transform(p: &PseudoDistribution, d: usize) -> MomentVector {
    let n = p.n;
    let max = (2 * d).min(n);
    match &p.weights {
        Weights::BySize(profile) => {
            let by_size = (0..=max)
                .map(|s| {
                    profile
                        .iter()
                        .enumerate()
                        .skip(s)
                        .filter(|(_, w)| !w.is_zero())
                        .map(|(j, w)| {
                            w * Rational::from_integer(binomial_big((n - s) as u64, (j - s) as u64))
                        })
                        .sum()
                })
                .collect();
            MomentVector {
                n,
                order: d,
                values: Moments::BySize(by_size),
            }
        }
        Weights::Sparse(map) => {
            let mut values: HashMap<SubsetId, Rational> = HashMap::new();
            for (h, w) in map {
                h.for_each_subset_up_to(max, |k| {
                    *values.entry(k).or_insert_with(Rational::zero) += w;
                });
            }
            values.retain(|_, v| !v.is_zero());
            MomentVector {
                n,
                order: d,
                values: Moments::Sparse(values),
            }
        }
    }
}

/// Largest ground set accepted by [`mobius_transform`] (dense `2^n` table).
pub const MOBIUS_MAX_N: usize = 24;

/// Inverse of [`zeta_transform`] on the full power set:
/// `p_H = Σ_{K ⊇ H} (-1)^{|K \ H|} y_K`.
pub fn mobius_transform(m: &MomentVector) -> Result<PseudoDistribution> {
    let n = m.n;
    if m.max_cardinality() < n {
        return Err(Error::Domain(format!(
            "moments known up to size {} only; the power set of [{n}] needs all of them",
            m.max_cardinality()
        )));
    }
    if n > MOBIUS_MAX_N {
        return Err(Error::Capacity(format!(
            "Möbius inversion over 2^{n} sets is not supported"
        )));
    }
    let size = 1usize << n;
    let mut table: Vec<Rational> = (0..size)
        .map(|b| m.get(SubsetId::from_bits(b as u64)))
        .collect::<Result<_>>()?;
    for i in 0..n {
        let bit = 1usize << i;
        for mask in 0..size {
            if mask & bit == 0 {
                let hi = table[mask | bit].clone();
                table[mask] -= hi;
            }
        }
    }
    PseudoDistribution::from_weights(
        n,
        table
            .into_iter()
            .enumerate()
            .map(|(b, w)| (SubsetId::from_bits(b as u64), w)),
    )
}
