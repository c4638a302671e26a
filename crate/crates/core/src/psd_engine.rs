//! Positive semidefiniteness and inertia.
//!
//! The exact path is a symmetric elimination `P M Pᵀ = L D Lᵀ` over the
//! rationals with 1×1 pivots and, when the whole remaining diagonal is zero,
//! a 2×2 pivot `[[0, b], [b, 0]]` (one positive and one negative
//! eigenvalue). By Sylvester's law the inertia of `D` is the inertia of `M`.
//! Any negative direction of `D` is pulled back through `Lᵀ` and `P` to a
//! witness `v` with `vᵀ M v < 0`, which is re-evaluated exactly before it is
//! reported.
//!
//! The numeric path runs a dense symmetric eigensolver in `f64` and only
//! answers PSD / NOT_PSD outside an explicit margin; anything else is
//! INCONCLUSIVE.

use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::pseudomoments::{
    constraint_moment_matrix, constraint_value, moment_matrix, termwise_nonnegative,
    LinearConstraint, SymMatrix,
};
use crate::subset_lattice::{
    format_rational, from_f64_exact, minus_one_pow, vec_rational_string, zeta_transform,
    MomentVector, PseudoDistribution, Rational, SubsetId, SubsetIndex,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn dim(&self) -> usize {
        self.positive + self.negative + self.zero
    }

    pub fn is_psd(&self) -> bool {
        self.negative == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Pivot {
    /// 1×1 pivot on original row `row`.
    Single {
        row: usize,
        #[serde(serialize_with = "serialize_rational")]
        value: Rational,
    },
    /// 2×2 pivot `[[0, b], [b, 0]]` on original rows `rows`.
    Block {
        rows: [usize; 2],
        #[serde(serialize_with = "serialize_rational")]
        off_diagonal: Rational,
    },
}

fn serialize_rational<S: serde::Serializer>(
    r: &Rational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

/// Outcome of the exact factorization.
#[derive(Clone, Debug)]
pub struct ExactFactorization {
    pub inertia: Inertia,
    pub pivots: Vec<Pivot>,
    /// Present whenever `inertia.negative > 0`; `vᵀ M v` is `witness_value`.
    pub witness: Option<Vec<Rational>>,
    pub witness_value: Option<Rational>,
}

/// Inertia and pivot log of an exact symmetric matrix.
pub fn exact_inertia(m: &SymMatrix) -> Result<(Inertia, Vec<Pivot>)> {
    let f = exact_factorization(m)?;
    Ok((f.inertia, f.pivots))
}

pub fn exact_factorization(m: &SymMatrix) -> Result<ExactFactorization> {
    let a = m
        .as_exact()
        .ok_or_else(|| Error::ModeMismatch("exact inertia needs an exact matrix".into()))?;
    factorize(a)
}

fn factorize(src: &RatMatrix) -> Result<ExactFactorization> {
    if !src.is_symmetric() {
        return Err(Error::Domain("matrix is not symmetric".into()));
    }
    let n = src.rows();
    let mut a: Vec<Vec<Rational>> = (0..n).map(|i| src.row(i).to_vec()).collect();
    let mut l: Vec<Vec<Rational>> = vec![Vec::new(); n];
    let mut perm: Vec<usize> = (0..n).collect();
    let mut pivots = Vec::new();
    let mut inertia = Inertia::default();
    // (position, kind) of the first negative part of D
    let mut negative_at: Option<(usize, bool)> = None;

    let swap = |a: &mut Vec<Vec<Rational>>,
                l: &mut Vec<Vec<Rational>>,
                perm: &mut Vec<usize>,
                i: usize,
                j: usize| {
        if i == j {
            return;
        }
        a.swap(i, j);
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        l.swap(i, j);
        perm.swap(i, j);
    };

    let mut k = 0;
    while k < n {
        if let Some(p) = (k..n).find(|&i| !a[i][i].is_zero()) {
            swap(&mut a, &mut l, &mut perm, k, p);
            let piv = a[k][k].clone();
            if piv.is_positive() {
                inertia.positive += 1;
            } else {
                inertia.negative += 1;
                negative_at.get_or_insert((k, false));
            }
            pivots.push(Pivot::Single {
                row: perm[k],
                value: piv.clone(),
            });
            let col: Vec<Rational> = (k + 1..n).map(|i| a[i][k].clone()).collect();
            for (ci, i) in (k + 1..n).enumerate() {
                if col[ci].is_zero() {
                    l[i].push(Rational::zero());
                    continue;
                }
                let li = &col[ci] / &piv;
                for (cj, j) in (k + 1..=i).enumerate() {
                    if col[cj].is_zero() {
                        continue;
                    }
                    let upd = &a[i][j] - &li * &col[cj];
                    a[j][i] = upd.clone();
                    a[i][j] = upd;
                }
                l[i].push(li);
            }
            k += 1;
            continue;
        }
        // Whole remaining diagonal is zero.
        let pair = (k..n).find_map(|i| (k..i).find(|&j| !a[i][j].is_zero()).map(|j| (i, j)));
        let Some((i, j)) = pair else {
            inertia.zero += n - k;
            break;
        };
        swap(&mut a, &mut l, &mut perm, k, j);
        swap(&mut a, &mut l, &mut perm, k + 1, i);
        let b = a[k + 1][k].clone();
        inertia.positive += 1;
        inertia.negative += 1;
        negative_at.get_or_insert((k, true));
        pivots.push(Pivot::Block {
            rows: [perm[k], perm[k + 1]],
            off_diagonal: b.clone(),
        });
        let c0: Vec<Rational> = (k + 2..n).map(|r| a[r][k].clone()).collect();
        let c1: Vec<Rational> = (k + 2..n).map(|r| a[r][k + 1].clone()).collect();
        for (ri, r) in (k + 2..n).enumerate() {
            for (si, s) in (k + 2..=r).enumerate() {
                let t = &c0[ri] * &c1[si] + &c1[ri] * &c0[si];
                if t.is_zero() {
                    continue;
                }
                let upd = &a[r][s] - t / &b;
                a[s][r] = upd.clone();
                a[r][s] = upd;
            }
            // E^{-1} = [[0, 1/b], [1/b, 0]]
            l[r].push(&c1[ri] / &b);
            l[r].push(&c0[ri] / &b);
        }
        // inside the block L is the identity
        l[k + 1].push(Rational::zero());
        k += 2;
    }

    let (witness, witness_value) = match negative_at {
        None => (None, None),
        Some((pos, block)) => {
            let mut u = vec![Rational::zero(); n];
            if block {
                let b = match pivots.iter().find(|p| matches!(p, Pivot::Block { .. })) {
                    Some(Pivot::Block { off_diagonal, .. }) => off_diagonal.clone(),
                    _ => unreachable!("block pivot recorded"),
                };
                u[pos] = Rational::one();
                u[pos + 1] = if b.is_positive() {
                    -Rational::one()
                } else {
                    Rational::one()
                };
            } else {
                u[pos] = Rational::one();
            }
            // Lᵀ w = u, back substitution; l[r][c] holds L(r, c) for c < r.
            let mut w = u;
            for c in (0..n).rev() {
                let mut acc = w[c].clone();
                for (r, row) in l.iter().enumerate().skip(c + 1) {
                    if let Some(x) = row.get(c) {
                        if !x.is_zero() && !w[r].is_zero() {
                            acc -= x * &w[r];
                        }
                    }
                }
                w[c] = acc;
            }
            let mut v = vec![Rational::zero(); n];
            for (pos, orig) in perm.iter().enumerate() {
                v[*orig] = w[pos].clone();
            }
            let value = src.quadratic_form(&v)?;
            if !value.is_negative() {
                return Err(Error::Domain(
                    "internal: factorization witness failed exact re-check".into(),
                ));
            }
            (Some(v), Some(value))
        }
    };

    Ok(ExactFactorization {
        inertia,
        pivots,
        witness,
        witness_value,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PsdStatus {
    #[serde(rename = "PSD")]
    Psd,
    #[serde(rename = "NOT_PSD")]
    NotPsd,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

/// How a verdict was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Every rank-one term carries a non-negative weight.
    Termwise,
    /// The support fits inside the index set, so the matrix is congruent to
    /// the diagonal of its weights.
    Diagonal,
    ExactFactorization,
    Numeric,
}

#[derive(Clone, Debug, Serialize)]
pub struct PsdVerdict {
    pub status: PsdStatus,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inertia: Option<Inertia>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    /// Index of the diagonal entry behind a [`Method::Diagonal`] witness.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pivot: Option<usize>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "serialize_opt_vec"
    )]
    pub witness: Option<Vec<Rational>>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "crate::subset_lattice::option_rational_string::serialize"
    )]
    pub witness_value: Option<Rational>,
}

fn serialize_opt_vec<S: serde::Serializer>(
    v: &Option<Vec<Rational>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => vec_rational_string::serialize(v, s),
        None => s.serialize_none(),
    }
}

impl PsdVerdict {
    fn bare(status: PsdStatus, method: Method) -> Self {
        PsdVerdict {
            status,
            method,
            inertia: None,
            lambda_min: None,
            margin: None,
            residual: None,
            pivot: None,
            witness: None,
            witness_value: None,
        }
    }
}

/// Exact PSD decision with witness.
pub fn exact_psd(m: &SymMatrix) -> Result<PsdVerdict> {
    let f = exact_factorization(m)?;
    let mut v = PsdVerdict::bare(
        if f.inertia.is_psd() {
            PsdStatus::Psd
        } else {
            PsdStatus::NotPsd
        },
        Method::ExactFactorization,
    );
    v.inertia = Some(f.inertia);
    v.witness = f.witness;
    v.witness_value = f.witness_value;
    Ok(v)
}

/// Smallest-eigenvalue estimate of a float matrix.
#[derive(Clone, Debug)]
pub struct EigenEstimate {
    pub lambda_min: f64,
    /// Largest `‖M v − λ v‖₂` over all computed eigenpairs.
    pub residual: f64,
    pub norm_inf: f64,
    pub eigenvector: Vec<f64>,
}

pub fn numeric_min_eigenvalue(m: &SymMatrix) -> Result<EigenEstimate> {
    let data = m
        .as_float()
        .ok_or_else(|| Error::ModeMismatch("numeric eigenvalues need a float matrix".into()))?;
    let n = m.dim();
    if n == 0 {
        return Err(Error::Domain("empty matrix".into()));
    }
    if data.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("non-finite matrix entry".into()));
    }
    let mat = DMatrix::from_row_slice(n, n, data);
    let norm_inf = (0..n)
        .map(|i| mat.row(i).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let eig = SymmetricEigen::new(mat.clone());
    let (imin, lambda_min) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty spectrum");
    let mv = &mat * &eig.eigenvectors;
    let residual = (0..n)
        .map(|j| {
            let lam = eig.eigenvalues[j];
            (0..n)
                .map(|i| {
                    let r = mv[(i, j)] - lam * eig.eigenvectors[(i, j)];
                    r * r
                })
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max);
    Ok(EigenEstimate {
        lambda_min,
        residual,
        norm_inf,
        eigenvector: eig.eigenvectors.column(imin).iter().copied().collect(),
    })
}

/// Relative part of the numeric margin.
pub const RELATIVE_MARGIN: f64 = 1e-8;

/// Numeric verdict for `m` (float). A negative estimate is re-checked in exact
/// arithmetic against `exact` when given, otherwise against the float entries
/// read as exact dyadic rationals.
pub fn numeric_psd(m: &SymMatrix, exact: Option<&SymMatrix>) -> Result<PsdVerdict> {
    let est = numeric_min_eigenvalue(m)?;
    let margin = (RELATIVE_MARGIN * est.norm_inf).max(est.residual);
    let mut v = PsdVerdict::bare(PsdStatus::Inconclusive, Method::Numeric);
    v.lambda_min = Some(est.lambda_min);
    v.margin = Some(margin);
    v.residual = Some(est.residual);
    if est.lambda_min >= margin {
        v.status = PsdStatus::Psd;
    } else if est.lambda_min <= -margin {
        let w: Vec<Rational> = est
            .eigenvector
            .iter()
            .map(|x| from_f64_exact(*x).expect("finite eigenvector"))
            .collect();
        let value = match exact.and_then(SymMatrix::as_exact) {
            Some(e) => e.quadratic_form(&w)?,
            None => {
                let data = m.as_float().expect("float matrix");
                let n = m.dim();
                let e = RatMatrix::from_fn(n, n, |i, j| {
                    from_f64_exact(data[i * n + j]).expect("finite entry")
                });
                e.quadratic_form(&w)?
            }
        };
        if value.is_negative() {
            v.status = PsdStatus::NotPsd;
            v.witness = Some(w);
            v.witness_value = Some(value);
        }
    }
    Ok(v)
}

/// Arithmetic used to decide PSD-ness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
    /// Exact up to [`VerifyOptions::exact_dimension_limit`], float above.
    Auto,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            "auto" => Ok(Mode::Auto),
            _ => Err(Error::Parse(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub mode: Mode,
    /// Decide the variable moment matrix termwise when all weights are non-negative.
    pub condition2_fast_path: bool,
    /// Termwise and diagonal shortcuts for constraint matrices.
    pub constraint_fast_paths: bool,
    pub exact_dimension_limit: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            mode: Mode::Auto,
            condition2_fast_path: true,
            constraint_fast_paths: true,
            exact_dimension_limit: 200,
        }
    }
}

impl VerifyOptions {
    pub fn with_mode(mode: Mode) -> Self {
        VerifyOptions {
            mode,
            ..Default::default()
        }
    }

    fn use_exact(&self, dim: usize) -> bool {
        match self.mode {
            Mode::Exact => true,
            Mode::Float => false,
            Mode::Auto => dim <= self.exact_dimension_limit,
        }
    }
}

/// PSD decision for `m` under `options`.
pub fn decide_psd(m: &SymMatrix, options: &VerifyOptions) -> Result<PsdVerdict> {
    if m.dim() == 0 {
        let mut v = PsdVerdict::bare(PsdStatus::Psd, Method::ExactFactorization);
        v.inertia = Some(Inertia::default());
        return Ok(v);
    }
    if m.as_exact().is_some() && options.use_exact(m.dim()) {
        exact_psd(m)
    } else {
        numeric_psd(&m.to_float()?, Some(m))
    }
}

/// Input to [`verify_conditions`].
#[derive(Clone, Copy, Debug)]
pub enum CertificateSource<'a> {
    Distribution(&'a PseudoDistribution),
    Moments(&'a MomentVector),
}

impl CertificateSource<'_> {
    fn n(&self) -> usize {
        match self {
            CertificateSource::Distribution(p) => p.n(),
            CertificateSource::Moments(m) => m.n(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MassReport {
    #[serde(serialize_with = "serialize_rational")]
    pub total_mass: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub residual: Rational,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixReport {
    pub order: usize,
    pub dimension: usize,
    pub fast_path: bool,
    #[serde(flatten)]
    pub verdict: PsdVerdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstraintReport {
    pub constraint: usize,
    #[serde(flatten)]
    pub matrix: MatrixReport,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Overall {
    #[serde(rename = "FEASIBLE")]
    Feasible,
    #[serde(rename = "INFEASIBLE")]
    Infeasible,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

impl Overall {
    pub fn exit_code(self) -> i32 {
        match self {
            Overall::Feasible => 0,
            Overall::Infeasible => 1,
            Overall::Inconclusive => 2,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub n: usize,
    pub level: usize,
    pub condition1: MassReport,
    pub condition2: MatrixReport,
    pub condition3: Vec<ConstraintReport>,
    pub overall: Overall,
}

impl VerificationReport {
    fn finish(
        n: usize,
        level: usize,
        condition1: MassReport,
        condition2: MatrixReport,
        condition3: Vec<ConstraintReport>,
    ) -> Self {
        let statuses = std::iter::once(condition2.verdict.status)
            .chain(condition3.iter().map(|c| c.matrix.verdict.status));
        let mut overall = if condition1.pass {
            Overall::Feasible
        } else {
            Overall::Infeasible
        };
        for s in statuses {
            match s {
                PsdStatus::NotPsd => overall = Overall::Infeasible,
                PsdStatus::Inconclusive if overall == Overall::Feasible => {
                    overall = Overall::Inconclusive
                }
                _ => {}
            }
        }
        VerificationReport {
            n,
            level,
            condition1,
            condition2,
            condition3,
            overall,
        }
    }
}

/// Runs the three feasibility conditions of the level-`t` relaxation:
/// unit mass, `M_{t+1}(y) ⪰ 0`, and `M_t^ℓ(y) ⪰ 0` for every constraint.
pub fn verify_conditions(
    source: CertificateSource<'_>,
    constraints: &[LinearConstraint],
    t: usize,
    options: &VerifyOptions,
) -> Result<VerificationReport> {
    let n = source.n();
    let moments = moments_for(source, t + 1)?;
    let condition1 = mass_report(&moments);
    let condition2 = matrix_condition(
        source,
        None,
        t + 1,
        options,
        options.condition2_fast_path,
        || moment_matrix(&moments, t + 1),
    )?;
    let condition3 = constraints
        .par_iter()
        .enumerate()
        .map(|(idx, c)| {
            let matrix = matrix_condition(
                source,
                Some(c),
                t,
                options,
                options.constraint_fast_paths,
                || constraint_moment_matrix(&moments, c, t),
            )?;
            Ok(ConstraintReport {
                constraint: idx,
                matrix,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::finish(
        n, t, condition1, condition2, condition3,
    ))
}

/// Unconstrained variant: unit mass and `Σ y_I Z_I Z_Iᵀ ⪰ 0` with zeta
/// vectors over `P_t(n)`.
pub fn verify_unconstrained(
    source: CertificateSource<'_>,
    t: usize,
    options: &VerifyOptions,
) -> Result<VerificationReport> {
    let n = source.n();
    let moments = moments_for(source, t)?;
    let condition1 = mass_report(&moments);
    let condition2 = matrix_condition(
        source,
        None,
        t,
        options,
        options.condition2_fast_path,
        || moment_matrix(&moments, t),
    )?;
    Ok(VerificationReport::finish(
        n,
        t,
        condition1,
        condition2,
        Vec::new(),
    ))
}

fn moments_for(source: CertificateSource<'_>, order: usize) -> Result<MomentVector> {
    match source {
        CertificateSource::Distribution(p) => Ok(zeta_transform(p, order)),
        CertificateSource::Moments(m) => {
            if m.max_cardinality() < (2 * order).min(m.n()) {
                return Err(Error::Domain(format!(
                    "moments up to size {} needed, {} available",
                    2 * order,
                    m.max_cardinality()
                )));
            }
            Ok(m.clone())
        }
    }
}

fn mass_report(m: &MomentVector) -> MassReport {
    let total = m.total();
    let residual = &total - Rational::one();
    MassReport {
        pass: residual.is_zero(),
        total_mass: total,
        residual,
    }
}

fn matrix_condition(
    source: CertificateSource<'_>,
    constraint: Option<&LinearConstraint>,
    order: usize,
    options: &VerifyOptions,
    fast_paths: bool,
    assemble: impl FnOnce() -> Result<SymMatrix>,
) -> Result<MatrixReport> {
    let n = source.n();
    let dimension = SubsetIndex::new(n, order)?.len();
    if let (true, CertificateSource::Distribution(p)) = (fast_paths, source) {
        if termwise_nonnegative(p, constraint)? {
            let mut verdict = PsdVerdict::bare(PsdStatus::Psd, Method::Termwise);
            verdict.inertia = None;
            return Ok(MatrixReport {
                order,
                dimension,
                fast_path: true,
                verdict,
            });
        }
        if p.max_support_cardinality().unwrap_or(0) <= order {
            let m = assemble()?;
            let verdict = diagonal_verdict(p, constraint, order, &m)?;
            return Ok(MatrixReport {
                order,
                dimension,
                fast_path: true,
                verdict,
            });
        }
    }
    let m = assemble()?;
    Ok(MatrixReport {
        order,
        dimension,
        fast_path: false,
        verdict: decide_psd(&m, options)?,
    })
}

/// Support inside `P_d(n)`: the matrix is `Z_d diag(w) Z_dᵀ`, so it is PSD iff
/// every weight is non-negative, and a negative `w_I` yields the witness
/// `Z_d^{-T} e_I` with `vᵀ M v = w_I`.
fn diagonal_verdict(
    p: &PseudoDistribution,
    constraint: Option<&LinearConstraint>,
    order: usize,
    m: &SymMatrix,
) -> Result<PsdVerdict> {
    let index = SubsetIndex::new(p.n(), order)?;
    let mut worst: Option<(SubsetId, Rational)> = None;
    for (set, y) in p.support()? {
        let w = match constraint {
            Some(c) => constraint_value(c, set) * y,
            None => y,
        };
        if w.is_negative() && worst.as_ref().is_none_or(|(_, cur)| w < *cur) {
            worst = Some((set, w));
        }
    }
    let Some((set, w)) = worst else {
        return Ok(PsdVerdict::bare(PsdStatus::Psd, Method::Diagonal));
    };
    let v: Vec<Rational> = index
        .iter()
        .map(|j| {
            if set.is_subset_of(j) {
                minus_one_pow((j - set).len())
            } else {
                Rational::zero()
            }
        })
        .collect();
    let exact = m.as_exact().expect("assembled exactly");
    let value = exact.quadratic_form(&v)?;
    if value != w {
        return Err(Error::Domain(
            "internal: diagonal witness failed exact re-check".into(),
        ));
    }
    let mut verdict = PsdVerdict::bare(PsdStatus::NotPsd, Method::Diagonal);
    verdict.pivot = index.rank(set);
    verdict.witness = Some(v);
    verdict.witness_value = Some(value);
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pseudomoments::zeta_sum_matrix;
    use crate::subset_lattice::{rat, ratio};
    use crate::zeta_algebra::zeta_vector;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sym(rows: &[&[i64]]) -> SymMatrix {
        SymMatrix::exact(
            RatMatrix::from_rows(
                rows.iter()
                    .map(|r| r.iter().map(|&x| rat(x)).collect())
                    .collect(),
            )
            .unwrap(),
            None,
        )
        .unwrap()
    }

    #[test]
    fn identity_inertia() {
        let m = SymMatrix::exact(RatMatrix::identity(5), None).unwrap();
        let (i, pivots) = exact_inertia(&m).unwrap();
        assert_eq!(
            i,
            Inertia {
                positive: 5,
                negative: 0,
                zero: 0
            }
        );
        assert_eq!(pivots.len(), 5);
    }

    #[test]
    fn indefinite_two_by_two() {
        let m = sym(&[&[1, 2], &[2, 1]]);
        let v = exact_psd(&m).unwrap();
        assert_eq!(v.status, PsdStatus::NotPsd);
        assert_eq!(
            v.inertia.unwrap(),
            Inertia {
                positive: 1,
                negative: 1,
                zero: 0
            }
        );
        let w = v.witness.unwrap();
        assert!(m.as_exact().unwrap().quadratic_form(&w).unwrap() < rat(0));
        // witness direction is (−2, 1) ∝ ... any direction with wᵀMw < 0 is fine
        assert!(w[0].clone() * &w[1] < rat(0));
    }

    #[test]
    fn zero_diagonal_uses_block_pivot() {
        let m = sym(&[&[0, 3, 0], &[3, 0, 0], &[0, 0, 0]]);
        let f = exact_factorization(&m).unwrap();
        assert_eq!(
            f.inertia,
            Inertia {
                positive: 1,
                negative: 1,
                zero: 1
            }
        );
        assert!(matches!(f.pivots[0], Pivot::Block { .. }));
        assert!(f.witness_value.unwrap() < rat(0));

        let m = sym(&[&[0, 1, 2], &[1, 0, 5], &[2, 5, 0]]);
        let f = exact_factorization(&m).unwrap();
        assert_eq!(f.inertia.dim(), 3);
        assert_eq!(f.inertia.negative, 2);
        assert!(f.witness_value.unwrap() < rat(0));
    }

    #[test]
    fn rank_one_gram_inertia() {
        let idx = SubsetIndex::new(5, 2).unwrap();
        let z = zeta_vector(SubsetId::from_labels([1, 4, 5]).unwrap(), &idx);
        let mut g = RatMatrix::zeros(idx.len(), idx.len());
        g.add_rank_one(&rat(1), &z);
        let (i, _) = exact_inertia(&SymMatrix::exact(g, None).unwrap()).unwrap();
        assert_eq!(
            i,
            Inertia {
                positive: 1,
                negative: 0,
                zero: idx.len() - 1
            }
        );
    }

    #[test]
    fn asymmetric_is_domain_error() {
        let m = RatMatrix::from_rows(vec![vec![rat(1), rat(2)], vec![rat(0), rat(1)]]).unwrap();
        assert!(matches!(factorize(&m), Err(Error::Domain(_))));
    }

    #[test]
    fn numeric_identity() {
        let m = SymMatrix::exact(RatMatrix::identity(4), None)
            .unwrap()
            .to_float()
            .unwrap();
        let est = numeric_min_eigenvalue(&m).unwrap();
        assert!((est.lambda_min - 1.0).abs() < 1e-12);
        assert_eq!(numeric_psd(&m, None).unwrap().status, PsdStatus::Psd);
    }

    #[test]
    fn numeric_negative_is_confirmed() {
        let m = SymMatrix::float(2, vec![1.0, 0.0, 0.0, -1e-3], None).unwrap();
        let v = numeric_psd(&m, None).unwrap();
        assert_eq!(v.status, PsdStatus::NotPsd);
        let w = v.witness.unwrap();
        assert!(w[0].is_zero());
        assert!(!w[1].is_zero());
        assert!(v.witness_value.unwrap() < rat(0));
    }

    #[test]
    fn numeric_near_zero_is_inconclusive() {
        let m = SymMatrix::float(2, vec![1.0, 0.0, 0.0, 0.0], None).unwrap();
        assert_eq!(
            numeric_psd(&m, None).unwrap().status,
            PsdStatus::Inconclusive
        );
        assert!(
            numeric_min_eigenvalue(&SymMatrix::exact(RatMatrix::identity(2), None).unwrap())
                .is_err()
        );
    }

    #[test]
    fn uniform_distribution_moment_matrix_is_psd_numerically() {
        let p = PseudoDistribution::uniform_up_to(8, 8).unwrap();
        let m = moment_matrix(&zeta_transform(&p, 2), 2).unwrap();
        let v = numeric_psd(&m.to_float().unwrap(), Some(&m)).unwrap();
        assert_eq!(v.status, PsdStatus::Psd);
    }

    #[test]
    fn point_mass_passes_all_conditions() {
        let n = 5;
        let x = SubsetId::from_labels([2, 3]).unwrap();
        let p = PseudoDistribution::point_mass(n, x).unwrap();
        let cs = vec![
            LinearConstraint::greater_equal([(1, rat(1)), (4, rat(1))], rat(1)),
            LinearConstraint::less_equal((0..n).map(|v| (v, rat(1))), rat(2)),
        ];
        for fast in [true, false] {
            let opts = VerifyOptions {
                condition2_fast_path: fast,
                constraint_fast_paths: fast,
                ..VerifyOptions::with_mode(Mode::Exact)
            };
            let r = verify_conditions(CertificateSource::Distribution(&p), &cs, 1, &opts).unwrap();
            assert_eq!(r.overall, Overall::Feasible);
            assert!(r.condition1.pass);
        }
    }

    #[test]
    fn diagonal_path_finds_negative_weight() {
        let n = 4;
        let p = PseudoDistribution::uniform_up_to(n, 1).unwrap();
        let c = LinearConstraint::greater_equal([(0, rat(3))], rat(1));
        let r = verify_conditions(
            CertificateSource::Distribution(&p),
            std::slice::from_ref(&c),
            1,
            &VerifyOptions::default(),
        )
        .unwrap();
        let c3 = &r.condition3[0].matrix;
        assert_eq!(c3.verdict.method, Method::Diagonal);
        assert_eq!(c3.verdict.status, PsdStatus::NotPsd);
        assert_eq!(c3.verdict.witness_value, Some(ratio(-1, 5)));
        assert_eq!(r.overall, Overall::Infeasible);
        // the factorization agrees
        let m = zeta_sum_matrix(&p, Some(&c), 1).unwrap();
        assert_eq!(exact_psd(&m).unwrap().status, PsdStatus::NotPsd);
    }

    #[test]
    fn unnormalized_fails_condition_one() {
        let p = PseudoDistribution::from_weights(3, [(SubsetId::EMPTY, ratio(1, 2))]).unwrap();
        let r = verify_unconstrained(
            CertificateSource::Distribution(&p),
            1,
            &VerifyOptions::default(),
        )
        .unwrap();
        assert!(!r.condition1.pass);
        assert_eq!(r.condition1.residual, ratio(-1, 2));
        assert_eq!(r.overall, Overall::Infeasible);
    }

    fn random_symmetric(rng: &mut ChaCha8Rng, dim: usize) -> RatMatrix {
        let mut m = RatMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..=i {
                let x = ratio(rng.gen_range(-20..=20), rng.gen_range(1..=4));
                m[(i, j)] = x.clone();
                m[(j, i)] = x;
            }
        }
        m
    }

    #[test]
    fn exact_and_numeric_agree_away_from_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut checked = 0;
        while checked < 200 {
            let dim = rng.gen_range(1..=10);
            let m = SymMatrix::exact(random_symmetric(&mut rng, dim), None).unwrap();
            let f = m.to_float().unwrap();
            let data = f.as_float().unwrap();
            let eig = SymmetricEigen::new(DMatrix::from_row_slice(dim, dim, data));
            if eig.eigenvalues.iter().any(|l| l.abs() < 1e-3) {
                continue;
            }
            checked += 1;
            let exact = exact_psd(&m).unwrap();
            let numeric = numeric_psd(&f, Some(&m)).unwrap();
            assert_eq!(exact.status, numeric.status);
            let expect_neg = eig.eigenvalues.iter().filter(|l| **l < 0.0).count();
            assert_eq!(exact.inertia.unwrap().negative, expect_neg);
        }
    }

    #[test]
    fn congruence_preserves_inertia() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..60 {
            let dim = rng.gen_range(1..=12);
            let mut w = random_symmetric(&mut rng, dim);
            // make some instances singular
            if rng.gen_bool(0.3) {
                for j in 0..dim {
                    let x = w[(0, j)].clone();
                    w[(dim - 1, j)] = x.clone();
                    w[(j, dim - 1)] = x;
                }
                w[(dim - 1, dim - 1)] = w[(0, 0)].clone();
            }
            // R = unit lower triangular × permutation: invertible by construction
            let perm = {
                let mut p: Vec<usize> = (0..dim).collect();
                for i in (1..dim).rev() {
                    p.swap(i, rng.gen_range(0..=i));
                }
                p
            };
            let r = RatMatrix::from_fn(dim, dim, |i, j| {
                let jj = perm[j];
                if i == jj {
                    rat(1)
                } else if i > jj {
                    rat(rng.gen_range(-3..=3))
                } else {
                    rat(0)
                }
            });
            let moved = r.transpose().mul(&w).unwrap().mul(&r).unwrap();
            let a = exact_inertia(&SymMatrix::exact(w, None).unwrap())
                .unwrap()
                .0;
            let b = exact_inertia(&SymMatrix::exact(moved, None).unwrap())
                .unwrap()
                .0;
            assert_eq!(a, b);
        }
    }

    #[test]
    fn moments_source_without_fast_path() {
        let p = PseudoDistribution::uniform_up_to(4, 2).unwrap();
        let y = zeta_transform(&p, 2);
        let r = verify_conditions(
            CertificateSource::Moments(&y),
            &[],
            1,
            &VerifyOptions::default(),
        )
        .unwrap();
        assert!(!r.condition2.fast_path);
        assert_eq!(r.overall, Overall::Feasible);
        let short = zeta_transform(&p, 1);
        assert!(verify_conditions(
            CertificateSource::Moments(&short),
            &[],
            1,
            &VerifyOptions::default()
        )
        .is_err());
    }
}
