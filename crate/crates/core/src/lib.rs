//! Exact-arithmetic toolkit for monodromy triples of rank-two and
//! rank-three logarithmic connections on the four-punctured sphere:
//! finite Hurwitz-orbit enumeration over the binary polyhedral groups,
//! the Killing–Coxeter / scalar-shift form of middle convolution between
//! 3×3 complex-reflection triples and SL2 triples, affine F4 wall counts
//! for the parameter space, and identity-level verification of algebraic
//! Painlevé VI solutions together with their isomonodromic 3×3 families.
//!
//! No floating point is used anywhere: scalars live in explicit towers
//! Q ⊂ Q(ζ_n) ⊂ Q(ζ_n)(√d), functions live in exact function fields of
//! rational or hyperelliptic curves.

pub mod field;
pub mod scalar;
pub mod poly;
pub mod ratfn;
pub mod curve;
pub mod series;
pub mod matrix;
pub mod quat;
pub mod braid;
pub mod groups;
pub mod hurwitz;
pub mod weylf4;
pub mod midconv;
pub mod painleve;
pub mod connections;
pub mod golden;
