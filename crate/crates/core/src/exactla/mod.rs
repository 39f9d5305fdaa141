//! Exact linear algebra over a prime field or ℚ.

pub mod field;
pub mod matrix;

pub use field::{Field, FieldElem, DEFAULT_PRIME};
pub use matrix::{complement_indices, quotient_data, span_rank, Echelon, Matrix, QuotientData, Rref, Vector};
