//! Cochain complexes with explicit homotopies and exactness witnesses.
//!
//! [`diagonal`] is the bidegree-(d,l) complex on quadruples, [`formal`] the
//! one-variable-graded complexes over ℂ[[x₁,x₂]] and their polynomial
//! counterparts, [`graded`] the assembled complex over all bidegrees, and
//! [`gamma`] the correction terms of the multiplication map.

pub mod diagonal;
pub mod formal;
pub mod gamma;
pub mod graded;

pub use diagonal::{DiagParams, H1Split, KeyCheck, Pair};
pub use formal::{Chain, Model, OneSided, Side};
pub use gamma::{gamma_closed_form, gamma_correction};
pub use graded::{GradedComplex, MixedIdentity, Order};
