//! Non-symmetric operads of cochains on finite-dimensional Loday algebras.
//!
//! Cochains are tagged by one of five parameter families ([`params`]). The
//! restriction maps of [`preoperadic`] turn each family into an operad on
//! cochains ([`operad`]), whose canonical multiplication yields the dot
//! product, the braces and the differential. [`cohomology`] computes exact
//! cohomology, [`identities`] checks the algebraic identities on random
//! inputs, and [`cli`] wires everything to the `loday` binary.

pub mod algebra;
pub mod cochain;
pub mod error;
pub mod field;
pub mod operad;
pub mod params;
pub mod preoperadic;
pub mod linalg;
pub mod cohomology;
pub mod identities;
pub mod format;
pub mod report;
pub mod cli;

pub use algebra::{AlgebraSpec, AlgebraType};
pub use cochain::Cochain;
pub use cohomology::{cocycle_representatives, cohomology_dims, matrix_of_d, Cohomology};
pub use error::{Error, Result};
pub use field::{Field, PrimeField, Rationals};
pub use format::{parse_algebra_file, serialize, AnyAlgebra};
pub use operad::{brace, gamma, MultContext};
pub use params::{OpSymbol, ParamElement, ParameterKind};
pub use preoperadic::{verify_system, StandardSystem};
