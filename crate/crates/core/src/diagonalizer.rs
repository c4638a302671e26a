//! Partial diagonalization of zeta sums over a shifted collection.
//!
//! For a shift `S`, the columns of the shifted zeta matrix `Z_{d(S)}` are the
//! zeta vectors of `C = {I ⊕ S : |I| <= d}`. Multiplying
//! `Σ_I w_I Z_I Z_Iᵀ` by `Z_{d(S)}^{-1}` on both sides sends every term with
//! `I ∈ C` to a unit vector, leaving a diagonal `D` plus rank-one remainder
//! terms for the support outside `C`. The two matrices are congruent, so they
//! share their inertia.

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::pseudomoments::{check_constraint_vars, constraint_value, LinearConstraint};
use crate::subset_lattice::{
    count_subsets, minus_one_pow, PseudoDistribution, Rational, SubsetId, SubsetIndex,
};
use crate::zeta_algebra::{build_shifted_zeta, ShiftedZetaInverse};

/// `{I ⊕ S : I ∈ P_d(n)}`, listed in the canonical order of `I`.
pub fn shifted_collection(n: usize, d: usize, shift: SubsetId) -> Result<Vec<SubsetId>> {
    if !shift.fits(n) {
        return Err(Error::Domain(format!("shift {shift} outside [{n}]")));
    }
    Ok(SubsetIndex::new(n, d)?.iter().map(|i| i ^ shift).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct RemainderTerm {
    pub set: SubsetId,
    pub weight: Rational,
    /// `Z_{d(S)}^{-1} Z_set`.
    pub vector: Vec<Rational>,
}

#[derive(Clone, Debug)]
pub struct DiagonalizationResult {
    pub n: usize,
    pub d: usize,
    pub shift: SubsetId,
    pub collection: Vec<SubsetId>,
    /// `w_{J ⊕ S}` at the position of `J` in `P_d(n)`.
    pub diagonal: Vec<Rational>,
    pub remainder: Vec<RemainderTerm>,
    /// Largest absolute entry of `Z_{d(S)}^{-1}`.
    pub inverse_max_abs: Rational,
}

/// Splits `Σ_I w_I Z_I Z_Iᵀ` (zeta vectors over `P_d(n)`) into the diagonal
/// part on the shifted collection and the remainder outside it. The weights
/// are `w_I = y_I`, or `g(x_I) y_I` when a constraint is given.
pub fn partial_diagonalize(
    p: &PseudoDistribution,
    weight: Option<&LinearConstraint>,
    d: usize,
    shift: SubsetId,
) -> Result<DiagonalizationResult> {
    let n = p.n();
    if let Some(c) = weight {
        check_constraint_vars(c, n)?;
    }
    let collection = shifted_collection(n, d, shift)?;
    let inv = ShiftedZetaInverse::new(n, d, shift)?;
    let index = inv.index();
    let mut diagonal = vec![Rational::zero(); index.len()];
    let mut outside = Vec::new();
    for (set, y) in p.support()? {
        let w = match weight {
            Some(c) => constraint_value(c, set) * y,
            None => y,
        };
        if w.is_zero() {
            continue;
        }
        match index.rank(set ^ shift) {
            Some(pos) => diagonal[pos] = w,
            None => outside.push((set, w)),
        }
    }
    outside.sort_by_key(|(s, _)| *s);
    let remainder = outside
        .into_par_iter()
        .map(|(set, weight)| {
            let vector = inv.apply_to_zeta(set)?;
            Ok(RemainderTerm {
                set,
                weight,
                vector,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DiagonalizationResult {
        n,
        d,
        shift,
        collection,
        diagonal,
        remainder,
        inverse_max_abs: inv.max_abs_entry()?,
    })
}

fn squared_norm(v: &[Rational]) -> Rational {
    v.iter().filter(|x| !x.is_zero()).map(|x| x * x).sum()
}

impl DiagonalizationResult {
    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    /// `D + Σ w_I R_I R_Iᵀ`.
    pub fn reconstruct(&self) -> RatMatrix {
        let mut m = RatMatrix::zeros(self.dim(), self.dim());
        for (i, w) in self.diagonal.iter().enumerate() {
            m[(i, i)] = w.clone();
        }
        for term in &self.remainder {
            m.add_rank_one(&term.weight, &term.vector);
        }
        m
    }

    pub fn min_diagonal(&self) -> Rational {
        self.diagonal
            .iter()
            .min()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// `min(D) + Σ_{w_I < 0} w_I ‖R_I‖²`, a lower bound on the smallest
    /// eigenvalue of [`reconstruct`](Self::reconstruct) by Weyl's inequality.
    pub fn weyl_lower_bound(&self) -> Rational {
        let negative: Rational = self
            .remainder
            .iter()
            .filter(|t| t.weight.is_negative())
            .map(|t| &t.weight * squared_norm(&t.vector))
            .sum();
        self.min_diagonal() + negative
    }

    /// `|P_d(n)|³ · max|Z_{d(S)}^{-1}|²`, the entrywise bound on `‖R_I‖²`.
    pub fn norm_envelope(&self) -> Rational {
        let dim = Rational::from_integer((count_subsets(self.n, self.d) as u64).into());
        &dim * &dim * &dim * &self.inverse_max_abs * &self.inverse_max_abs
    }

    /// Weyl bound with every squared norm replaced by [`norm_envelope`](Self::norm_envelope).
    pub fn envelope_lower_bound(&self) -> Rational {
        let env = self.norm_envelope();
        let negative: Rational = self
            .remainder
            .iter()
            .filter(|t| t.weight.is_negative())
            .map(|t| &t.weight * &env)
            .sum();
        self.min_diagonal() + negative
    }

    /// A direction `v` with `vᵀ M v < 0` for the original zeta sum `M`, taken
    /// from the most negative transformed diagonal entry, with its value.
    pub fn diagonal_witness(&self) -> Result<Option<(Vec<Rational>, Rational)>> {
        let recon = self.reconstruct();
        let best = (0..self.dim())
            .map(|j| (j, recon[(j, j)].clone()))
            .filter(|(_, x)| x.is_negative())
            .min_by(|a, b| a.1.cmp(&b.1));
        let Some((j, value)) = best else {
            return Ok(None);
        };
        let inv = ShiftedZetaInverse::new(self.n, self.d, self.shift)?;
        Ok(Some((inv.row(j)?, value)))
    }
}

/// `Z_{d(S)}ᵀ v`: coordinates in which `vᵀ M v` is the quadratic form of the
/// reconstructed matrix.
pub fn transformed_coordinates(
    v: &[Rational],
    n: usize,
    d: usize,
    shift: SubsetId,
) -> Result<Vec<Rational>> {
    build_shifted_zeta(n, d, shift)?
        .matrix()
        .transpose()
        .mul_vec(v)
}

/// Quadratic form of the reconstruction with `S = ∅` and `C = P_t(n)`, for
/// `p` supported on `P_{t+1}(n)`:
/// `Σ_{|I|<=t} w_I v_I² + Σ_{|J|=t+1} w_J (Σ_{I⊊J} (−1)^{|I|} v_I)²`.
pub fn rayleigh_form(
    v: &[Rational],
    p: &PseudoDistribution,
    c: Option<&LinearConstraint>,
    t: usize,
) -> Result<Rational> {
    let index = SubsetIndex::new(p.n(), t)?;
    if v.len() != index.len() {
        return Err(Error::Domain(format!(
            "vector of length {} over {} sets",
            v.len(),
            index.len()
        )));
    }
    if let Some(c) = c {
        check_constraint_vars(c, p.n())?;
    }
    let support = p.support()?;
    if let Some((s, _)) = support.iter().find(|(s, _)| s.len() > t + 1) {
        return Err(Error::Domain(format!(
            "support set {s} larger than {}",
            t + 1
        )));
    }
    let ranks: HashMap<SubsetId, usize> = index.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut total = Rational::zero();
    for (set, y) in support {
        let w = match c {
            Some(c) => constraint_value(c, set) * y,
            None => y,
        };
        if w.is_zero() {
            continue;
        }
        if set.len() <= t {
            let x = &v[ranks[&set]];
            total += w * x * x;
        } else {
            let mut s = Rational::zero();
            set.for_each_subset_up_to(t, |i| {
                let x = &v[ranks[&i]];
                if !x.is_zero() {
                    s += minus_one_pow(i.len()) * x;
                }
            });
            total += w * &s * &s;
        }
    }
    Ok(total)
}
