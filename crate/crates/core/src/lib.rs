//! Decide whether the augmentation submodule of a finite transformation monoid
//! is simple over ℂ, and build explicit monoid families whose 0-minimal
//! J-class has rank greater than two.
//!
//! Points of Ω are numbered `1..=n` in every public API. All linear algebra is
//! exact over ℚ; the rank of a rational matrix over ℚ equals its rank over ℂ.
//!
//! The crate is organised bottom-up:
//!
//! - [`transformation`], [`monoid`], [`green`], [`perm`]: transformations,
//!   explicit monoids, Green's relations, maximal subgroups, transitivity.
//! - [`linalg`]: exact rationals and dense rational matrices.
//! - [`graph`]: simple graphs, union-find, spanning trees.
//! - [`analysis`]: the set system ℰ, the graph Γ(M), the five-condition
//!   simplicity report and the cyclic-submodule falsifier.
//! - [`rank2`]: the sandwich-matrix criterion for 0-minimal J-classes of rank 2.
//! - [`construct`]: compatibility of kernel/image data, Rees assembly and the
//!   r = 3, r = 4 and general r ≥ 5 families.
//! - [`format`]: the monoid and system text formats.
//! - [`corpus`], [`selfcheck`]: random test corpora and the end-to-end checks
//!   behind `augsimp selftest`.

pub mod analysis;
pub mod construct;
pub mod corpus;
pub mod format;
pub mod graph;
pub mod green;
pub mod linalg;
pub mod monoid;
pub mod perm;
pub mod rank2;
pub mod selfcheck;
pub mod transformation;

pub use analysis::{SimplicityReport, Verdict};
pub use linalg::{Rational, RationalMatrix};
pub use monoid::FiniteMonoid;
pub use transformation::Transformation;
