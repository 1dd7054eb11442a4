//! Exact-arithmetic engine for quantity calculus.
//!
//! The library models quantities as pairs of an exact rational value and a
//! dimension drawn from a finitely generated free Abelian group. On top of
//! that it provides systems of units (sections), subspace / tensor / quotient
//! constructions (including natural-unit reductions such as setting the speed
//! of light to 1), homomorphisms between quantity spaces, and a rank-based
//! classification of spaces up to isomorphism.
//!
//! Everything is exact: scalars are arbitrary-precision rationals and
//! dimension exponents are arbitrary-precision integers, so all algebraic
//! laws hold on the nose rather than up to floating-point error.
//!
//! The `qc` binary in this crate exposes dimension checking, unit conversion
//! and natural-unit reduction over plain-text system definition files; see
//! the crate README for the file format.

pub mod cli;
pub mod construct;
pub mod dim;
pub mod error;
pub mod hom;
pub mod lattice;
pub mod scalar;
pub mod section;
pub mod space;
pub mod system;

pub use construct::{QuotientSpace, Subsection, Subspace, TensorProduct};
pub use dim::{DimBasis, Dimension};
pub use error::{AlgebraError, ParseError};
pub use hom::{
    canonical_model_iso, classify, classify_with_sections, first_isomorphism,
    ClassificationResult, FirstIsomorphism, SpaceHom,
};
pub use lattice::{IntMatrix, QuotientStructure, SnfDecomposition, Subgroup};
pub use scalar::Scalar;
pub use section::{convert, Character, Section};
pub use space::{Quantity, QuantitySpace};
pub use system::{EvalError, QuantityExpr, SystemDef};
