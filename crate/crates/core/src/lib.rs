//! Exact computer algebra for the contractive quantum plane.
//!
//! The crate is layered bottom-up: [`coeff`] (scalars and q), [`series`]
//! (truncated power series), [`qalgebra`] (the q-deformed product),
//! [`graded`] and [`fq`] (germ pairs, graded copies and the fibered product
//! F_q), [`quadruple`] (the tensor model), [`complexes`] (cochain complexes,
//! homotopies and exactness witnesses), [`qtopology`] and [`spectra`].
//! [`suites`] bundles the identity checks used by the command-line driver.

pub mod coeff;
pub mod complexes;
pub mod error;
pub mod fq;
pub mod graded;
pub mod linalg;
pub mod qalgebra;
pub mod qtopology;
pub mod quadruple;
pub mod random;
pub mod series;
pub mod spectra;
pub mod suites;

pub use coeff::{make_q, parse_q, Cf, Cq, Field, ModulusClass, QParam, Q};
pub use error::{Error, Result};
pub use series::{Agreement, Series1, Series2, EXACT};
