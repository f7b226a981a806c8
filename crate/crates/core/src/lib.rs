//! Exact classification of invariant bilinear differential pairings between
//! irreducible homogeneous bundles on complex projective space
//! `CP_n = SL(n+1, C) / P`.
//!
//! The engine is organised bottom-up:
//!
//! * [`rootdata`]: weights of `sl(n)` in L-coordinates, the normalized
//!   invariant form, and the affine Weyl action on `gl(n+1)` tuples.
//! * [`pmodule`]: bundles in crossed/uncrossed Dynkin notation, geometric
//!   weights and conversions.
//! * [`tensor`]: Pieri, Littlewood–Richardson, interlacing, symbol spaces.
//! * [`mbundle`]: composition series of `M`-modules and their tensor products.
//! * [`firstorder`]: Casimir constants and first-order classification.
//! * [`higher`]: excluded weights, central characters, order-`M`
//!   classification.
//! * [`symbolic`]: affine weight expressions such as `v+w-3` for reporting
//!   results with symbolic crossed entries.
//!
//! All non-integer arithmetic is exact and generic over [`Scalar`]; the
//! aliases below fix the usual choices.

pub mod error;
pub mod firstorder;
pub mod higher;
pub mod mbundle;
pub mod pmodule;
pub mod rootdata;
pub mod scalar;
pub mod symbolic;
pub mod tensor;

pub use error::{Error, Result};
pub use pmodule::{GModuleSpec, Labels, PModuleSpec};
pub use rootdata::{GlTuple, LWeight};
pub use scalar::Scalar;

/// Machine-word rationals; ample for every desk-scale computation here.
pub type Rational = num_rational::Ratio<i64>;
/// Arbitrary-precision rationals.
pub type BigRational = num_rational::BigRational;

pub type Weight = LWeight<Rational>;
pub type BigWeight = LWeight<BigRational>;
