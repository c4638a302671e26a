//! Subsets of a ground set `[n]`, `n <= 64`, stored as bit masks.
//!
//! Bit `i` stands for element `i + 1`; every user-facing rendering (JSON,
//! `Display`) uses the 1-based labels. The canonical order sorts by
//! cardinality first and colexicographically within a cardinality, which for
//! equal-size masks is just numeric order of the mask. Under this order the
//! zeta matrix of the lattice is upper triangular.

mod distribution;
mod rational;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub use distribution::{mobius_transform, zeta_transform, MomentVector, PseudoDistribution};
pub use rational::{
    big, format_rational, from_f64_exact, minus_one_pow, option_rational_string, parse_rational,
    pow_int, rat, ratio, rational_string, sign_of, to_f64, vec_rational_string, Rational,
};

/// Largest supported ground set.
pub const MAX_GROUND_SET: usize = 64;

/// Upper bound on the number of subsets materialised by a single enumeration.
pub const MAX_ENUMERATION: u128 = 1 << 26;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SubsetId(u64);

impl SubsetId {
    pub const EMPTY: SubsetId = SubsetId(0);

    pub const fn from_bits(bits: u64) -> Self {
        SubsetId(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// Builds a set from 0-based element indices.
    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> Result<Self> {
        let mut bits = 0u64;
        for e in elements {
            if e >= MAX_GROUND_SET {
                return Err(Error::Capacity(format!(
                    "element index {e} outside a 64-element ground set"
                )));
            }
            bits |= 1 << e;
        }
        Ok(SubsetId(bits))
    }

    /// Builds a set from 1-based labels.
    pub fn from_labels<I: IntoIterator<Item = usize>>(labels: I) -> Result<Self> {
        let mut elems = Vec::new();
        for l in labels {
            if l == 0 {
                return Err(Error::Domain("element labels are 1-based".into()));
            }
            elems.push(l - 1);
        }
        Self::from_elements(elems)
    }

    pub fn singleton(e: usize) -> Self {
        assert!(e < MAX_GROUND_SET, "element {e} out of range");
        SubsetId(1 << e)
    }

    /// The whole ground set `[n]`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_GROUND_SET, "ground set {n} too large");
        if n == 64 {
            SubsetId(u64::MAX)
        } else {
            SubsetId((1u64 << n) - 1)
        }
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, e: usize) -> bool {
        e < MAX_GROUND_SET && self.0 >> e & 1 == 1
    }

    pub fn is_subset_of(self, other: SubsetId) -> bool {
        self.0 & !other.0 == 0
    }

    /// True when every element lies in `0..n`.
    pub fn fits(self, n: usize) -> bool {
        self.is_subset_of(SubsetId::full(n.min(MAX_GROUND_SET)))
    }

    pub fn insert(self, e: usize) -> Self {
        self | SubsetId::singleton(e)
    }

    /// 0-based elements in increasing order.
    pub fn elements(self) -> Elements {
        Elements(self.0)
    }

    /// 1-based labels in increasing order.
    pub fn labels(self) -> Vec<usize> {
        self.elements().map(|e| e + 1).collect()
    }

    /// Calls `f` on every subset of `self` with at most `max_len` elements.
    pub fn for_each_subset_up_to(self, max_len: usize, mut f: impl FnMut(SubsetId)) {
        let elems: Vec<usize> = self.elements().collect();
        fn rec(elems: &[usize], start: usize, cur: u64, left: usize, f: &mut dyn FnMut(SubsetId)) {
            f(SubsetId(cur));
            if left == 0 {
                return;
            }
            for i in start..elems.len() {
                rec(elems, i + 1, cur | 1 << elems[i], left - 1, f);
            }
        }
        rec(&elems, 0, 0, max_len, &mut f);
    }
}

pub struct Elements(u64);

impl Iterator for Elements {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let e = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(e)
    }
}

impl Ord for SubsetId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for SubsetId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl BitOr for SubsetId {
    type Output = SubsetId;
    fn bitor(self, rhs: Self) -> Self {
        SubsetId(self.0 | rhs.0)
    }
}

impl BitAnd for SubsetId {
    type Output = SubsetId;
    fn bitand(self, rhs: Self) -> Self {
        SubsetId(self.0 & rhs.0)
    }
}

/// Symmetric difference.
impl BitXor for SubsetId {
    type Output = SubsetId;
    fn bitxor(self, rhs: Self) -> Self {
        SubsetId(self.0 ^ rhs.0)
    }
}

/// Set difference.
impl Sub for SubsetId {
    type Output = SubsetId;
    fn sub(self, rhs: Self) -> Self {
        SubsetId(self.0 & !rhs.0)
    }
}

impl fmt::Display for SubsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, l) in self.labels().into_iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for SubsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubsetId{self}")
    }
}

/// `C(n, k)` for `n <= 64`; fits in `u64`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Arbitrary-precision `C(n, k)`.
pub fn binomial_big(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `|P_d(n)|`, the number of subsets of `[n]` with at most `d` elements.
pub fn count_subsets(n: usize, d: usize) -> u128 {
    (0..=d.min(n)).map(|s| binomial(n, s) as u128).sum()
}

fn check_ground_set(n: usize) -> Result<()> {
    if n > MAX_GROUND_SET {
        return Err(Error::Capacity(format!(
            "ground set of size {n} exceeds {MAX_GROUND_SET}"
        )));
    }
    Ok(())
}

/// All subsets of `[n]` of size at most `d`, in canonical order.
///
/// `d > n` is read as `d = n`.
pub fn enumerate_subsets(n: usize, d: usize) -> Result<Vec<SubsetId>> {
    check_ground_set(n)?;
    let d = d.min(n);
    let total = count_subsets(n, d);
    if total > MAX_ENUMERATION {
        return Err(Error::Capacity(format!(
            "P_{d}({n}) has {total} members, above the enumeration limit"
        )));
    }
    let mut out = Vec::with_capacity(total as usize);
    for s in 0..=d {
        push_combinations(n, s, &mut out);
    }
    Ok(out)
}

/// Appends every `s`-subset of `[n]` in increasing mask order (Gosper's hack).
fn push_combinations(n: usize, s: usize, out: &mut Vec<SubsetId>) {
    if s == 0 {
        out.push(SubsetId::EMPTY);
        return;
    }
    let limit: u128 = 1u128 << n;
    let mut x: u128 = (1u128 << s) - 1;
    while x < limit {
        out.push(SubsetId(x as u64));
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((r ^ x) >> 2) / c) | r;
    }
}

/// Canonical enumeration of `P_d(n)` with O(|I|) rank lookup.
#[derive(Clone, Debug)]
pub struct SubsetIndex {
    n: usize,
    d: usize,
    offsets: Vec<usize>,
    sets: Vec<SubsetId>,
}

impl SubsetIndex {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        let sets = enumerate_subsets(n, d)?;
        let d = d.min(n);
        let mut offsets = Vec::with_capacity(d + 2);
        let mut acc = 0usize;
        for s in 0..=d {
            offsets.push(acc);
            acc += binomial(n, s) as usize;
        }
        offsets.push(acc);
        Ok(SubsetIndex {
            n,
            d,
            offsets,
            sets,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Effective maximal cardinality (`min(d, n)`).
    pub fn order(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[SubsetId] {
        &self.sets
    }

    pub fn get(&self, i: usize) -> SubsetId {
        self.sets[i]
    }

    /// Position of `s` in the canonical order, if `s` belongs to `P_d(n)`.
    pub fn rank(&self, s: SubsetId) -> Option<usize> {
        let k = s.len();
        if k > self.d || !s.fits(self.n) {
            return None;
        }
        let colex: u64 = s
            .elements()
            .enumerate()
            .map(|(i, c)| binomial(c, i + 1))
            .sum();
        Some(self.offsets[k] + colex as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = SubsetId> + '_ {
        self.sets.iter().copied()
    }
}

/// `Σ_{i=0}^{r} (-1)^i C(m, i)`; zero for `r < 0`.
pub fn alt_binomial_sum(m: u64, r: i64) -> Rational {
    if r < 0 {
        return Rational::zero();
    }
    let top = (r as u64).min(m);
    let mut acc = BigInt::zero();
    let mut term = BigInt::one();
    for i in 0..=top {
        if i > 0 {
            term = term * (m - i + 1) / i;
        }
        if i % 2 == 0 {
            acc += &term;
        } else {
            acc -= &term;
        }
    }
    Rational::from_integer(acc)
}
