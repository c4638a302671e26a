//! Moment matrices of the hierarchy.
//!
//! Two assembly routes produce the same matrices: the moment form
//! (`[M]_{I,J} = y_{I ∪ J}`, which scales to hundreds of rows because the
//! certificates are size-symmetric) and the rank-one zeta sum
//! `Σ_I w_I Z_I Z_Iᵀ`, which needs the support enumerated and serves as the
//! reference.

use std::collections::{BTreeMap, HashMap};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::subset_lattice::{
    binomial_big, enumerate_subsets, rational_string, to_f64, MomentVector, PseudoDistribution,
    Rational, SubsetId, SubsetIndex,
};
use crate::zeta_algebra::zeta_support;

/// `g(x) = Σ_i A_i x_i − b ≥ 0`. Variables are 0-based internally.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearConstraint {
    coeffs: BTreeMap<usize, Rational>,
    rhs: Rational,
}

impl LinearConstraint {
    /// `Σ coeffs · x ≥ rhs`.
    pub fn greater_equal<I>(coeffs: I, rhs: Rational) -> Self
    where
        I: IntoIterator<Item = (usize, Rational)>,
    {
        let mut map: BTreeMap<usize, Rational> = BTreeMap::new();
        for (v, a) in coeffs {
            *map.entry(v).or_insert_with(Rational::zero) += a;
        }
        map.retain(|_, a| !a.is_zero());
        LinearConstraint { coeffs: map, rhs }
    }

    /// `Σ coeffs · x ≤ rhs`, stored negated.
    pub fn less_equal<I>(coeffs: I, rhs: Rational) -> Self
    where
        I: IntoIterator<Item = (usize, Rational)>,
    {
        Self::greater_equal(coeffs.into_iter().map(|(v, a)| (v, -a)), -rhs)
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, var: usize) -> Rational {
        self.coeffs
            .get(&var)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn rhs(&self) -> &Rational {
        &self.rhs
    }

    /// `g(x_I)`.
    pub fn value_at(&self, set: SubsetId) -> Rational {
        constraint_value(self, set)
    }

    /// `g(x)` at a fractional point; variables beyond `x` read as zero.
    pub fn evaluate(&self, x: &[Rational]) -> Rational {
        let mut acc = -self.rhs.clone();
        for (v, a) in &self.coeffs {
            if let Some(xv) = x.get(*v) {
                acc += a * xv;
            }
        }
        acc
    }

    /// Largest variable index with a non-zero coefficient.
    pub fn max_var(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&ConstraintJson {
            coeffs: self
                .coeffs
                .iter()
                .map(|(v, a)| CoeffJson {
                    var: v + 1,
                    value: a.clone(),
                })
                .collect(),
            rhs: self.rhs.clone(),
        })?)
    }

    /// Parses the JSON form; `var` labels are 1-based.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: ConstraintJson = serde_json::from_str(text)?;
        let mut coeffs = Vec::with_capacity(raw.coeffs.len());
        for c in raw.coeffs {
            if c.var == 0 {
                return Err(Error::Domain("variable labels are 1-based".into()));
            }
            coeffs.push((c.var - 1, c.value));
        }
        Ok(Self::greater_equal(coeffs, raw.rhs))
    }
}

#[derive(Serialize, Deserialize)]
struct ConstraintJson {
    coeffs: Vec<CoeffJson>,
    #[serde(with = "rational_string")]
    rhs: Rational,
}

#[derive(Serialize, Deserialize)]
struct CoeffJson {
    var: usize,
    #[serde(with = "rational_string")]
    value: Rational,
}

/// `Σ_{i∈I} A_i − b`.
pub fn constraint_value(c: &LinearConstraint, set: SubsetId) -> Rational {
    let mut acc = -c.rhs.clone();
    for (v, a) in &c.coeffs {
        if set.contains(*v) {
            acc += a;
        }
    }
    acc
}

/// Arithmetic carried by a [`SymMatrix`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    Exact,
    Float,
}

#[derive(Clone, Debug, PartialEq)]
enum Entries {
    Exact(RatMatrix),
    Float { dim: usize, data: Vec<f64> },
}

/// Symmetric matrix, optionally labelled by the subsets indexing its rows.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    labels: Option<Vec<SubsetId>>,
    entries: Entries,
}

impl SymMatrix {
    pub fn exact(m: RatMatrix, labels: Option<Vec<SubsetId>>) -> Result<Self> {
        if !m.is_symmetric() {
            return Err(Error::Domain("matrix is not symmetric".into()));
        }
        check_labels(&labels, m.rows())?;
        Ok(SymMatrix {
            labels,
            entries: Entries::Exact(m),
        })
    }

    pub fn float(dim: usize, data: Vec<f64>, labels: Option<Vec<SubsetId>>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::Domain("float data does not match dimension".into()));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("non-finite matrix entry".into()));
        }
        for i in 0..dim {
            for j in 0..i {
                if data[i * dim + j] != data[j * dim + i] {
                    return Err(Error::Domain("matrix is not symmetric".into()));
                }
            }
        }
        check_labels(&labels, dim)?;
        Ok(SymMatrix {
            labels,
            entries: Entries::Float { dim, data },
        })
    }

    pub fn dim(&self) -> usize {
        match &self.entries {
            Entries::Exact(m) => m.rows(),
            Entries::Float { dim, .. } => *dim,
        }
    }

    pub fn arithmetic(&self) -> Arithmetic {
        match self.entries {
            Entries::Exact(_) => Arithmetic::Exact,
            Entries::Float { .. } => Arithmetic::Float,
        }
    }

    pub fn labels(&self) -> Option<&[SubsetId]> {
        self.labels.as_deref()
    }

    pub fn as_exact(&self) -> Option<&RatMatrix> {
        match &self.entries {
            Entries::Exact(m) => Some(m),
            Entries::Float { .. } => None,
        }
    }

    pub fn as_float(&self) -> Option<&[f64]> {
        match &self.entries {
            Entries::Float { data, .. } => Some(data),
            Entries::Exact(_) => None,
        }
    }

    /// Rounds every entry to the nearest `f64`.
    pub fn to_float(&self) -> Result<SymMatrix> {
        match &self.entries {
            Entries::Float { .. } => Ok(self.clone()),
            Entries::Exact(m) => {
                let data: Vec<f64> = m.data().iter().map(to_f64).collect();
                SymMatrix::float(m.rows(), data, self.labels.clone())
            }
        }
    }

    /// Entry-wise sum; both operands must carry the same arithmetic.
    pub fn add(&self, other: &SymMatrix) -> Result<SymMatrix> {
        if self.dim() != other.dim() {
            return Err(Error::Domain("dimension mismatch".into()));
        }
        match (&self.entries, &other.entries) {
            (Entries::Exact(a), Entries::Exact(b)) => {
                let mut out = a.clone();
                out.add_assign(b)?;
                SymMatrix::exact(out, self.labels.clone())
            }
            (Entries::Float { dim, data: a }, Entries::Float { data: b, .. }) => SymMatrix::float(
                *dim,
                a.iter().zip(b).map(|(x, y)| x + y).collect(),
                self.labels.clone(),
            ),
            _ => Err(Error::ModeMismatch(
                "cannot combine exact and float matrices".into(),
            )),
        }
    }
}

fn check_labels(labels: &Option<Vec<SubsetId>>, dim: usize) -> Result<()> {
    match labels {
        Some(l) if l.len() != dim => Err(Error::Domain(format!(
            "{} labels for a {dim}-dimensional matrix",
            l.len()
        ))),
        _ => Ok(()),
    }
}

/// `[M]_{I,J} = y_{I ∪ J}` over `P_order(n)`.
pub fn moment_matrix(m: &MomentVector, order: usize) -> Result<SymMatrix> {
    let index = SubsetIndex::new(m.n(), order)?;
    assemble_by_union(&index, |k| m.get(k))
}

/// `M_{t+1}(y)` over `P_{t+1}(n)`.
pub fn variable_moment_matrix(m: &MomentVector, t: usize) -> Result<SymMatrix> {
    moment_matrix(m, t + 1)
}

/// `[M_t^ℓ(y)]_{I,J} = Σ_i A_i y_{I∪J∪{i}} − b y_{I∪J}` over `P_t(n)`.
pub fn constraint_moment_matrix(
    m: &MomentVector,
    c: &LinearConstraint,
    t: usize,
) -> Result<SymMatrix> {
    let index = SubsetIndex::new(m.n(), t)?;
    check_constraint_vars(c, m.n())?;
    let total: Rational = c.coeffs.values().sum();
    assemble_by_union(&index, |k| {
        if let Some(by_size) = m.size_profile() {
            let s = k.len();
            let y_k = m.get(k)?;
            let inside: Rational = c
                .coeffs
                .iter()
                .filter(|(v, _)| k.contains(**v))
                .map(|(_, a)| a)
                .sum();
            let outside = &total - &inside;
            let mut acc = &inside * &y_k - &c.rhs * &y_k;
            if !outside.is_zero() {
                let y_up = by_size.get(s + 1).ok_or_else(|| missing(k, m))?;
                if s + 1 > m.max_cardinality() {
                    return Err(missing(k, m));
                }
                acc += outside * y_up;
            }
            Ok(acc)
        } else {
            constraint_moment(m, c, k)
        }
    })
}

fn missing(k: SubsetId, m: &MomentVector) -> Error {
    Error::Domain(format!(
        "moment of size {} needed next to {k}, vector holds up to size {}",
        k.len() + 1,
        m.max_cardinality()
    ))
}

pub(crate) fn check_constraint_vars(c: &LinearConstraint, n: usize) -> Result<()> {
    match c.max_var() {
        Some(v) if v >= n => Err(Error::Domain(format!(
            "constraint uses variable {} beyond n = {n}",
            v + 1
        ))),
        _ => Ok(()),
    }
}

/// `z_K = Σ_i A_i y_{K ∪ {i}} − b y_K`.
fn constraint_moment(m: &MomentVector, c: &LinearConstraint, k: SubsetId) -> Result<Rational> {
    let mut acc = -(&c.rhs * m.get(k)?);
    for (v, a) in &c.coeffs {
        acc += a * m.get(k.insert(*v))?;
    }
    Ok(acc)
}

/// Moments `z_I` of the constraint-weighted vector for all `|I| <= 2·order`.
pub fn constraint_moments(
    m: &MomentVector,
    c: &LinearConstraint,
    order: usize,
) -> Result<MomentVector> {
    check_constraint_vars(c, m.n())?;
    let mut values = HashMap::new();
    for k in enumerate_subsets(m.n(), 2 * order)? {
        let z = constraint_moment(m, c, k)?;
        if !z.is_zero() {
            values.insert(k, z);
        }
    }
    MomentVector::from_values(m.n(), order, values)
}

/// Weights `g(x_I) y_I`: the pseudo-distribution whose zeta transform is
/// the constraint moment vector.
pub fn pushforward(p: &PseudoDistribution, c: &LinearConstraint) -> Result<PseudoDistribution> {
    check_constraint_vars(c, p.n())?;
    let support = p.support()?;
    PseudoDistribution::from_weights(
        p.n(),
        support
            .into_iter()
            .map(|(s, w)| (s, constraint_value(c, s) * w)),
    )
}

fn assemble_by_union(
    index: &SubsetIndex,
    mut entry: impl FnMut(SubsetId) -> Result<Rational>,
) -> Result<SymMatrix> {
    let dim = index.len();
    let mut cache: HashMap<SubsetId, Rational> = HashMap::new();
    let mut out = RatMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..=i {
            let k = index.get(i) | index.get(j);
            let v = match cache.get(&k) {
                Some(v) => v.clone(),
                None => {
                    let v = entry(k)?;
                    cache.insert(k, v.clone());
                    v
                }
            };
            if !v.is_zero() {
                out[(j, i)] = v.clone();
                out[(i, j)] = v;
            }
        }
    }
    SymMatrix::exact(out, Some(index.sets().to_vec()))
}

/// Largest support [`zeta_sum_matrix`] will enumerate.
pub const ZETA_SUM_MAX_SUPPORT: u128 = 1 << 20;

/// `Σ_I w_I Z_I Z_Iᵀ` over `P_d(n)`, with `w_I = y_I` or `g(x_I) y_I`.
pub fn zeta_sum_matrix(
    p: &PseudoDistribution,
    weight: Option<&LinearConstraint>,
    d: usize,
) -> Result<SymMatrix> {
    if p.support_len() > ZETA_SUM_MAX_SUPPORT {
        return Err(Error::Capacity(format!(
            "zeta sum over {} support sets",
            p.support_len()
        )));
    }
    if let Some(c) = weight {
        check_constraint_vars(c, p.n())?;
    }
    let index = SubsetIndex::new(p.n(), d)?;
    let dim = index.len();
    let mut out = RatMatrix::zeros(dim, dim);
    for (set, y) in p.support()? {
        let w = match weight {
            Some(c) => constraint_value(c, set) * y,
            None => y,
        };
        if w.is_zero() {
            continue;
        }
        let ones = zeta_support(set, &index);
        for &a in &ones {
            for &b in &ones {
                out[(a, b)] += &w;
            }
        }
    }
    SymMatrix::exact(out, Some(index.sets().to_vec()))
}

/// Moments of the size-symmetric weight `α` on every set of size `<= smax`:
/// `y_I = α Σ_{j=|I|}^{smax} C(n − |I|, j − |I|)`.
pub fn symmetric_moments(n: usize, smax: usize, alpha: &Rational) -> Result<MomentVector> {
    if smax > n {
        return Err(Error::Parameter(format!("smax = {smax} exceeds n = {n}")));
    }
    let by_size = (0..=n)
        .map(|s| {
            (s..=smax)
                .map(|j| Rational::from_integer(binomial_big((n - s) as u64, (j - s) as u64)))
                .sum::<Rational>()
                * alpha
        })
        .collect();
    MomentVector::by_size(n, n.div_ceil(2), by_size)
}

/// Whether `g(x_I)·y_I >= 0` across the whole support.
pub fn termwise_nonnegative(p: &PseudoDistribution, c: Option<&LinearConstraint>) -> Result<bool> {
    let Some(c) = c else {
        return Ok(p.all_weights_nonnegative());
    };
    Ok(p.support()?
        .iter()
        .all(|(s, w)| !(constraint_value(c, *s) * w).is_negative()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subset_lattice::{rat, ratio, zeta_transform};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn labels(v: &[usize]) -> SubsetId {
        SubsetId::from_labels(v.iter().copied()).unwrap()
    }

    fn uniform_two() -> PseudoDistribution {
        PseudoDistribution::from_weights(
            2,
            enumerate_subsets(2, 2)
                .unwrap()
                .into_iter()
                .map(|s| (s, ratio(1, 4))),
        )
        .unwrap()
    }

    #[test]
    fn constraint_value_examples() {
        // T − Σ x with T = 2 at a 3-set
        let card = LinearConstraint::less_equal((0..6).map(|v| (v, rat(1))), rat(2));
        assert_eq!(card.value_at(labels(&[1, 2, 3])), rat(-1));
        assert_eq!(card.value_at(SubsetId::EMPTY), rat(2));
        let c = LinearConstraint::greater_equal([(0, rat(2)), (1, rat(2))], rat(1));
        assert_eq!(c.value_at(SubsetId::EMPTY), rat(-1));
        assert_eq!(c.value_at(labels(&[1])), rat(1));
    }

    #[test]
    fn moment_matrix_of_uniform() {
        let y = zeta_transform(&uniform_two(), 1);
        let m = variable_moment_matrix(&y, 0).unwrap();
        let expected = RatMatrix::from_rows(vec![
            vec![rat(1), ratio(1, 2), ratio(1, 2)],
            vec![ratio(1, 2), ratio(1, 2), ratio(1, 4)],
            vec![ratio(1, 2), ratio(1, 4), ratio(1, 2)],
        ])
        .unwrap();
        assert_eq!(m.as_exact().unwrap(), &expected);
    }

    #[test]
    fn constraint_matrix_of_uniform() {
        let y = zeta_transform(&uniform_two(), 1);
        let c = LinearConstraint::greater_equal([(0, rat(1)), (1, rat(1))], rat(1));
        let m = constraint_moment_matrix(&y, &c, 0).unwrap();
        assert_eq!(m.dim(), 1);
        assert_eq!(m.as_exact().unwrap()[(0, 0)], rat(0));
    }

    #[test]
    fn tight_point_mass_gives_zero_matrix() {
        let p = PseudoDistribution::point_mass(4, labels(&[1, 2])).unwrap();
        let c = LinearConstraint::greater_equal([(0, rat(1)), (1, rat(1))], rat(2));
        let m = constraint_moment_matrix(&zeta_transform(&p, 2), &c, 1).unwrap();
        assert!(m.as_exact().unwrap().data().iter().all(|x| x.is_zero()));
    }

    #[test]
    fn point_mass_is_rank_one() {
        let set = labels(&[2, 3]);
        let p = PseudoDistribution::point_mass(4, set).unwrap();
        let m = variable_moment_matrix(&zeta_transform(&p, 2), 1).unwrap();
        let idx = SubsetIndex::new(4, 2).unwrap();
        let z = crate::zeta_algebra::zeta_vector(set, &idx);
        let mut expected = RatMatrix::zeros(idx.len(), idx.len());
        expected.add_rank_one(&rat(1), &z);
        assert_eq!(m.as_exact().unwrap(), &expected);
    }

    #[test]
    fn missing_moment_is_reported() {
        let p = PseudoDistribution::point_mass(6, labels(&[1])).unwrap();
        let y = zeta_transform(&p, 1);
        assert!(matches!(
            variable_moment_matrix(&y, 1),
            Err(Error::Domain(_))
        ));
        let c = LinearConstraint::greater_equal([(0, rat(1))], rat(0));
        assert!(matches!(
            constraint_moment_matrix(&y, &c, 1),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn symmetric_moment_examples() {
        let y = symmetric_moments(4, 4, &ratio(1, 16)).unwrap();
        for s in 0..=4 {
            assert_eq!(y.size_profile().unwrap()[s], ratio(1, 1 << s));
        }
        let y = symmetric_moments(7, 0, &rat(1)).unwrap();
        assert_eq!(y.total(), rat(1));
        assert_eq!(y.get(labels(&[3])).unwrap(), rat(0));
        let y = symmetric_moments(16, 2, &ratio(1, 137)).unwrap();
        assert_eq!(y.total(), rat(1));
    }

    #[test]
    fn symmetric_moments_match_enumeration() {
        for n in 1..=8 {
            for smax in 0..=n {
                let p = PseudoDistribution::uniform_up_to(n, smax).unwrap();
                let alpha = p.size_profile().unwrap()[0].clone();
                let closed = symmetric_moments(n, smax, &alpha).unwrap();
                let enumerated = zeta_transform(&p.to_sparse().unwrap(), n.div_ceil(2));
                for s in enumerate_subsets(n, n).unwrap() {
                    assert_eq!(closed.get(s).unwrap(), enumerated.get(s).unwrap());
                }
            }
        }
    }

    #[test]
    fn size_profile_constraint_matrix_matches_sparse() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let n = rng.gen_range(2..=7);
            let p = PseudoDistribution::uniform_up_to(n, rng.gen_range(0..=n)).unwrap();
            let coeffs: Vec<_> = (0..n).map(|v| (v, rat(rng.gen_range(-3..=3)))).collect();
            let c = LinearConstraint::greater_equal(coeffs, rat(rng.gen_range(-2..=2)));
            let a = constraint_moment_matrix(&zeta_transform(&p, 2), &c, 1).unwrap();
            let b = constraint_moment_matrix(&zeta_transform(&p.to_sparse().unwrap(), 2), &c, 1)
                .unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn zeta_sum_of_empty_point_mass() {
        let p = PseudoDistribution::point_mass(5, SubsetId::EMPTY).unwrap();
        let m = zeta_sum_matrix(&p, None, 2).unwrap();
        let e = m.as_exact().unwrap();
        assert_eq!(e[(0, 0)], rat(1));
        assert_eq!(e.data().iter().filter(|x| !x.is_zero()).count(), 1);
    }

    #[test]
    fn mixing_modes_is_an_error() {
        let p = uniform_two();
        let a = zeta_sum_matrix(&p, None, 1).unwrap();
        let b = a.to_float().unwrap();
        assert!(matches!(a.add(&b), Err(Error::ModeMismatch(_))));
        assert!(a.add(&a).is_ok());
        assert!(b.add(&b).is_ok());
    }

    #[test]
    fn float_matrix_validation() {
        assert!(SymMatrix::float(2, vec![1.0, f64::NAN, f64::NAN, 1.0], None).is_err());
        assert!(SymMatrix::float(2, vec![1.0, 2.0, 3.0, 1.0], None).is_err());
        let asym = RatMatrix::from_rows(vec![vec![rat(1), rat(2)], vec![rat(3), rat(1)]]).unwrap();
        assert!(SymMatrix::exact(asym, None).is_err());
    }

    #[test]
    fn constraint_json_round_trip() {
        let c = LinearConstraint::greater_equal([(0, ratio(1, 2)), (3, rat(-2))], ratio(7, 3));
        let text = c.to_json().unwrap();
        assert!(text.contains("\"var\": 4"));
        assert_eq!(LinearConstraint::from_json(&text).unwrap(), c);
        assert!(
            LinearConstraint::from_json(r#"{"coeffs":[{"var":0,"value":"1"}],"rhs":"0"}"#).is_err()
        );
    }
}
