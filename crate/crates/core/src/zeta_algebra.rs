//! Zeta vectors and matrices over `P_d(n)`, their symmetric-difference
//! shifts, and structured inverses.
//!
//! For a shift `S`, the shifted zeta matrix has entry `(I, J) = 1` iff
//! `I ⊆ J ⊕ S`, so its column `J` is the zeta vector of `J ⊕ S`. Its inverse
//! factors as `Z_d^{-1} A_{d(S)}` where `A_{d(S)}` is the sparse signed
//! companion matrix built here; nothing in this module falls back to generic
//! Gaussian inversion.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::matrix::RatMatrix;
use crate::subset_lattice::{alt_binomial_sum, minus_one_pow, Rational, SubsetId, SubsetIndex};

/// `[Z_I]_J = 1` iff `J ⊆ I`, for `J` ranging over `index`.
pub fn zeta_vector(set: SubsetId, index: &SubsetIndex) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); index.len()];
    for pos in zeta_support(set, index) {
        v[pos] = Rational::one();
    }
    v
}

/// Positions of the ones of the zeta vector of `set`.
pub fn zeta_support(set: SubsetId, index: &SubsetIndex) -> Vec<usize> {
    let mut out = Vec::new();
    set.for_each_subset_up_to(index.order(), |k| {
        if let Some(r) = index.rank(k) {
            out.push(r);
        }
    });
    out.sort_unstable();
    out
}

/// `Z_{d(S)}`; with `S = ∅` this is the plain zeta matrix `Z_d`.
#[derive(Clone, Debug)]
pub struct ZetaMatrix {
    pub shift: SubsetId,
    index: SubsetIndex,
    entries: RatMatrix,
}

impl ZetaMatrix {
    pub fn index(&self) -> &SubsetIndex {
        &self.index
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> RatMatrix {
        self.entries
    }
}

/// `A_{d(S)}` with `(I, K) = (-1)^{|K ∩ S|}` when `I \ S ⊆ K ⊆ I`.
#[derive(Clone, Debug)]
pub struct CompanionMatrix {
    pub shift: SubsetId,
    index: SubsetIndex,
    entries: RatMatrix,
}

impl CompanionMatrix {
    pub fn index(&self) -> &SubsetIndex {
        &self.index
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.entries
    }
}

pub fn build_shifted_zeta(n: usize, d: usize, shift: SubsetId) -> Result<ZetaMatrix> {
    let index = SubsetIndex::new(n, d)?;
    let dim = index.len();
    let mut entries = RatMatrix::zeros(dim, dim);
    for (j, col) in index.iter().enumerate() {
        for i in zeta_support(col ^ shift, &index) {
            entries[(i, j)] = Rational::one();
        }
    }
    Ok(ZetaMatrix {
        shift,
        index,
        entries,
    })
}

pub fn build_companion(n: usize, d: usize, shift: SubsetId) -> Result<CompanionMatrix> {
    let index = SubsetIndex::new(n, d)?;
    let dim = index.len();
    let mut entries = RatMatrix::zeros(dim, dim);
    for (i, row) in index.iter().enumerate() {
        let fixed = row - shift;
        let free = row & shift;
        free.for_each_subset_up_to(free.len(), |h| {
            let k = fixed | h;
            let col = index.rank(k).expect("K ⊆ I stays inside P_d(n)");
            entries[(i, col)] = minus_one_pow(h.len());
        });
    }
    Ok(CompanionMatrix {
        shift,
        index,
        entries,
    })
}

/// `Z_d^{-1}`: `(I, J) = (-1)^{|J \ I|}` for `I ⊆ J`.
pub fn zeta_inverse(index: &SubsetIndex) -> RatMatrix {
    let dim = index.len();
    let mut out = RatMatrix::zeros(dim, dim);
    for (i, row) in index.iter().enumerate() {
        for (j, col) in index.iter().enumerate().skip(i) {
            if row.is_subset_of(col) {
                out[(i, j)] = minus_one_pow((col - row).len());
            }
        }
    }
    out
}

/// `Z_{d(S)}^{-1} = Z_d^{-1} A_{d(S)}`.
pub fn invert_shifted_zeta(n: usize, d: usize, shift: SubsetId) -> Result<RatMatrix> {
    ShiftedZetaInverse::new(n, d, shift)?.to_matrix()
}

/// Entry `(I, J)` of `Z_{d(S)}^{-1}` in closed form:
/// `(-1)^{|J ∩ S| + |J \ I|} Σ_{i=0}^{d-|I ∪ J|} (-1)^i C(|S \ (I ∪ J)|, i)`
/// when `I \ S ⊆ J`, zero otherwise.
pub fn closed_form_inverse_entry(i: SubsetId, j: SubsetId, shift: SubsetId, d: usize) -> Rational {
    if !(i - shift).is_subset_of(j) {
        return Rational::zero();
    }
    let union = i | j;
    let sign = minus_one_pow((j & shift).len() + (j - i).len());
    let free = (shift - union).len() as u64;
    let top = d as i64 - union.len() as i64;
    sign * alt_binomial_sum(free, top)
}

/// Applies `Z_{d(S)}^{-1}` through its factorization, one sparse product at a time.
#[derive(Clone, Debug)]
pub struct ShiftedZetaInverse {
    shift: SubsetId,
    index: SubsetIndex,
    zeta_inv: RatMatrix,
    companion: RatMatrix,
}

impl ShiftedZetaInverse {
    pub fn new(n: usize, d: usize, shift: SubsetId) -> Result<Self> {
        let companion = build_companion(n, d, shift)?;
        let index = companion.index.clone();
        let zeta_inv = zeta_inverse(&index);
        Ok(ShiftedZetaInverse {
            shift,
            index,
            zeta_inv,
            companion: companion.entries,
        })
    }

    pub fn shift(&self) -> SubsetId {
        self.shift
    }

    pub fn index(&self) -> &SubsetIndex {
        &self.index
    }

    pub fn apply(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        self.zeta_inv.mul_vec(&self.companion.mul_vec(v)?)
    }

    /// `Z_{d(S)}^{-1} Z_set`.
    pub fn apply_to_zeta(&self, set: SubsetId) -> Result<Vec<Rational>> {
        self.apply(&zeta_vector(set, &self.index))
    }

    /// Row `J` of `Z_{d(S)}^{-1}`, i.e. `Z_{d(S)}^{-T} e_J`.
    pub fn row(&self, j: usize) -> Result<Vec<Rational>> {
        let e: Vec<Rational> = (0..self.index.len())
            .map(|k| {
                if k == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        // row j of Z^{-1} A is (A^T Z^{-T} e_j)^T
        let t = self.zeta_inv.transpose().mul_vec(&e)?;
        self.companion.transpose().mul_vec(&t)
    }

    pub fn to_matrix(&self) -> Result<RatMatrix> {
        self.zeta_inv.mul(&self.companion)
    }

    /// Largest absolute entry of `Z_{d(S)}^{-1}`.
    pub fn max_abs_entry(&self) -> Result<Rational> {
        Ok(self.to_matrix()?.max_abs())
    }
}

/// Identity checks for one shift.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftCheck {
    /// 1-based labels of `S`.
    pub shift: Vec<usize>,
    /// `Z_{d(S)} · Z_d^{-1} A_{d(S)} = I`.
    pub inverse_identity: bool,
    /// `A_{d(S)} · Z_{d(S)} = Z_d`.
    pub companion_identity: bool,
    /// Entries where the closed form differs from the factored inverse.
    pub closed_form_mismatches: usize,
}

impl ShiftCheck {
    pub fn passed(&self) -> bool {
        self.inverse_identity && self.companion_identity && self.closed_form_mismatches == 0
    }
}

pub fn check_shift(n: usize, d: usize, shift: SubsetId) -> Result<ShiftCheck> {
    let z = build_shifted_zeta(n, d, shift)?;
    let a = build_companion(n, d, shift)?;
    let zd = build_shifted_zeta(n, d, SubsetId::EMPTY)?;
    let inv = zeta_inverse(z.index()).mul(a.matrix())?;
    let index = z.index();
    let mut mismatches = 0;
    for (r, i) in index.iter().enumerate() {
        for (c, j) in index.iter().enumerate() {
            if closed_form_inverse_entry(i, j, shift, d) != inv[(r, c)] {
                mismatches += 1;
            }
        }
    }
    Ok(ShiftCheck {
        shift: shift.labels(),
        inverse_identity: z.matrix().mul(&inv)?.is_identity(),
        companion_identity: a.matrix().mul(z.matrix())? == *zd.matrix(),
        closed_form_mismatches: mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subset_lattice::rat;

    fn labels(v: &[usize]) -> SubsetId {
        SubsetId::from_labels(v.iter().copied()).unwrap()
    }

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn zeta_vector_examples() {
        let idx = SubsetIndex::new(4, 2).unwrap();
        let v = zeta_vector(SubsetId::EMPTY, &idx);
        assert_eq!(v[0], rat(1));
        assert!(v[1..].iter().all(|x| x.is_zero()));
        let full = zeta_vector(SubsetId::full(4), &idx);
        assert!(full.iter().all(|x| x.is_one()));

        let idx = SubsetIndex::new(3, 1).unwrap();
        let v = zeta_vector(labels(&[1, 3]), &idx);
        assert_eq!(v, vec![rat(1), rat(1), rat(0), rat(1)]);
    }

    #[test]
    fn zeta_vector_one_count() {
        let idx = SubsetIndex::new(6, 2).unwrap();
        for bits in 0..64u64 {
            let s = SubsetId::from_bits(bits);
            let ones = zeta_vector(s, &idx).iter().filter(|x| x.is_one()).count();
            let expected: u64 = (0..=2.min(s.len()))
                .map(|k| crate::subset_lattice::binomial(s.len(), k))
                .sum();
            assert_eq!(ones as u64, expected);
        }
    }

    #[test]
    fn shifted_zeta_small() {
        let z = build_shifted_zeta(2, 1, labels(&[1])).unwrap();
        assert_eq!(*z.matrix(), m(&[&[1, 1, 1], &[1, 0, 1], &[0, 0, 1]]));
    }

    #[test]
    fn unshifted_is_unit_upper_triangular() {
        let z = build_shifted_zeta(5, 3, SubsetId::EMPTY).unwrap();
        let a = z.matrix();
        for i in 0..a.rows() {
            assert!(a[(i, i)].is_one());
            for j in 0..i {
                assert!(a[(i, j)].is_zero());
            }
        }
    }

    #[test]
    fn column_at_shift_is_empty_pattern() {
        let s = labels(&[2, 4]);
        let z = build_shifted_zeta(4, 2, s).unwrap();
        let col = z.index().rank(s).unwrap();
        let c = z.matrix().column(col);
        assert!(c[0].is_one());
        assert!(c[1..].iter().all(|x| x.is_zero()));
    }

    #[test]
    fn companion_examples() {
        let a = build_companion(2, 1, labels(&[1])).unwrap();
        assert_eq!(*a.matrix(), m(&[&[1, 0, 0], &[1, -1, 0], &[0, 0, 1]]));
        let id = build_companion(3, 2, SubsetId::EMPTY).unwrap();
        assert!(id.matrix().is_identity());
        let z = build_shifted_zeta(2, 1, labels(&[1])).unwrap();
        let prod = a.matrix().mul(z.matrix()).unwrap();
        assert_eq!(prod, m(&[&[1, 1, 1], &[0, 1, 0], &[0, 0, 1]]));
    }

    #[test]
    fn shifted_inverse_small() {
        let inv = invert_shifted_zeta(2, 1, labels(&[1])).unwrap();
        assert_eq!(inv, m(&[&[0, 1, -1], &[1, -1, 0], &[0, 0, 1]]));
    }

    #[test]
    fn unshifted_inverse_signs() {
        let idx = SubsetIndex::new(3, 1).unwrap();
        let inv = invert_shifted_zeta(3, 1, SubsetId::EMPTY).unwrap();
        for (i, a) in idx.iter().enumerate() {
            for (j, b) in idx.iter().enumerate() {
                let expected = if a.is_subset_of(b) {
                    minus_one_pow((b - a).len())
                } else {
                    rat(0)
                };
                assert_eq!(inv[(i, j)], expected);
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        let s = labels(&[1]);
        assert_eq!(
            closed_form_inverse_entry(labels(&[1]), SubsetId::EMPTY, s, 1),
            rat(1)
        );
        assert_eq!(
            closed_form_inverse_entry(SubsetId::EMPTY, labels(&[2]), s, 1),
            rat(-1)
        );
        assert_eq!(
            closed_form_inverse_entry(labels(&[1]), labels(&[2]), s, 1),
            rat(0)
        );
    }

    #[test]
    fn shift_check_passes() {
        let c = check_shift(4, 2, labels(&[1, 3])).unwrap();
        assert_eq!(c.shift, vec![1, 3]);
        assert!(c.passed());
    }

    #[test]
    fn inverse_identities_small_range() {
        for n in 0..=5 {
            for d in 0..=2 {
                let z_d = build_shifted_zeta(n, d, SubsetId::EMPTY).unwrap();
                for bits in 0..(1u64 << n) {
                    let s = SubsetId::from_bits(bits);
                    let z = build_shifted_zeta(n, d, s).unwrap();
                    let inv = invert_shifted_zeta(n, d, s).unwrap();
                    assert!(z.matrix().mul(&inv).unwrap().is_identity());
                    let a = build_companion(n, d, s).unwrap();
                    assert_eq!(a.matrix().mul(z.matrix()).unwrap(), *z_d.matrix());
                    let idx = z.index();
                    for (i, a) in idx.iter().enumerate() {
                        for (j, b) in idx.iter().enumerate() {
                            assert_eq!(closed_form_inverse_entry(a, b, s, d), inv[(i, j)]);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn row_and_apply_agree_with_matrix() {
        let s = labels(&[1, 3, 4]);
        let inv = ShiftedZetaInverse::new(5, 2, s).unwrap();
        let full = inv.to_matrix().unwrap();
        for j in 0..inv.index().len() {
            assert_eq!(inv.row(j).unwrap(), full.row(j).to_vec());
        }
        let v = inv.apply_to_zeta(labels(&[2, 3, 5])).unwrap();
        let z = zeta_vector(labels(&[2, 3, 5]), inv.index());
        assert_eq!(v, full.mul_vec(&z).unwrap());
    }
}
