//! Eigenvalue types of finite-order automorphisms of abelian varieties.
//!
//! An automorphism `g` of finite order acts on the tangent space with eigenvalues
//! `e(x₁), …, e(xₙ)`, `e(x) = exp(2πix)`. The multiset `{x₁, …, xₙ} ⊂ [0, 1)` is
//! its *type* and `x₁ + ⋯ + xₙ` its age. This crate works with types exactly:
//!
//! - [`qz`]: canonical fractions in ℚ/ℤ and the totient-style helpers.
//! - [`types`]: validation, weight, inverse, powers, sums and containment.
//! - [`enumeration`]: primitive types of weight at most 1 and the denominator bound.
//! - [`series`]: the graded generating function whose weight-1 slice lists all
//!   decompositions of age-1 types, with a knapsack cross-check.
//! - [`classification`]: the 35 age-1 types, their decompositions and proof routes,
//!   and verification against the reference tables.
//! - [`cli`]: the `abvar-types` command-line interface.
//!
//! Heavy sweeps run on rayon when the `parallel` feature is on (default); see [`Exec`].

pub mod classification;
pub mod cli;
pub mod enumeration;
pub mod error;
pub mod fixtures;
pub mod par;
pub mod qz;
pub mod report;
pub mod series;
pub mod types;

pub use classification::{classify, decompose, enumerate_age_one, AgeOneCatalogue, Strategy};
pub use enumeration::{catalogue, primitives_for_n, primitives_up_to_weight, PrimitiveCatalogue};
pub use error::{Error, Result};
pub use fixtures::{Fixtures, TableNote};
pub use par::Exec;
pub use qz::FracQZ;
pub use report::{Status, VerificationReport};
pub use series::{GradedSlice, Monomial, SCALE};
pub use types::{AutType, PrimitiveType, Weight};
