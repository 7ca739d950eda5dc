//! Lagrangian subalgebras of `g + g`: root data, Weyl combinatorics,
//! generalized Belavin-Drinfeld triples, strata and components of the
//! variety of Lagrangian subalgebras, Poisson ranks, and a Chevalley-basis
//! oracle that checks the closed formulas by brute-force linear algebra.
//!
//! All arithmetic is exact. The linear algebra is generic over [`Field`];
//! the rest of the crate works over [`Rational`].

#![allow(clippy::needless_range_loop)]

pub mod field;
pub mod linalg;
pub mod rootdata;
pub mod weyl;
pub mod bd;
pub mod lagrlin;
pub mod chevalley;
pub mod strata;
pub mod poisson;
pub mod cli;

pub use field::{Field, Fp, QuadExt};

/// Default scalar type.
pub type Rational = num_rational::BigRational;
/// Exact rational matrices.
pub type QMatrix = linalg::Matrix<Rational>;
/// Exact rational subspaces.
pub type QSubspace = linalg::Subspace<Rational>;
/// Prime field used by the randomized nonemptiness check.
pub type F10007 = Fp<10007>;
