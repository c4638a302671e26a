//! Exact construction and verification of Lasserre / sum-of-squares
//! hierarchy relaxations for 0/1 programs.
//!
//! The crate is organised around the objects the hierarchy is built from:
//!
//! - [`subset_lattice`]: subsets of a ground set as bit masks, the canonical
//!   cardinality-then-colex ordering, pseudo-distributions over subsets and
//!   the zeta/Möbius transforms that turn them into moment vectors.
//! - [`zeta_algebra`]: zeta matrices, their symmetric-difference shifts,
//!   the companion factor of the shifted inverse and the closed-form inverse
//!   entries.
//! - [`pseudomoments`]: moment matrices of variables and of linear
//!   constraints, assembled either from moments or as weighted sums of
//!   rank-one zeta outer products.
//! - [`psd_engine`]: exact inertia by symmetric elimination, numeric minimum
//!   eigenvalues with explicit margins, and full feasibility reports.
//! - [`diagonalizer`]: partial diagonalization over a shifted collection,
//!   Weyl lower bounds and the Rayleigh form of the level-`t` constraint
//!   matrix.
//! - [`tardy_gap`] and [`polyopt_gap`]: the two integrality-gap families
//!   (minimum number of tardy jobs, unconstrained degree-`k` polynomials)
//!   with their certificates.
//! - [`cli`]: the `lasgap` batch entry point.
//!
//! All arithmetic that decides a verdict is exact ([`Rational`]); floating
//! point only appears behind [`psd_engine::Mode::Float`] and every negative
//! verdict it produces is re-checked exactly.

pub mod cli;
pub mod diagonalizer;
pub mod error;
pub mod matrix;
pub mod polyopt_gap;
pub mod psd_engine;
pub mod pseudomoments;
pub mod subset_lattice;
pub mod tardy_gap;
pub mod zeta_algebra;

pub use error::{Error, Result};
pub use matrix::RatMatrix;
pub use subset_lattice::{
    alt_binomial_sum, enumerate_subsets, mobius_transform, zeta_transform, MomentVector,
    PseudoDistribution, Rational, SubsetId, SubsetIndex,
};
