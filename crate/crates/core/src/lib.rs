//! Exact non-commutative differential calculus over finite-dimensional unital
//! associative algebras: universal differential forms, derivations of the form
//! algebra and their brackets, connections and curvature, Hochschild cohomology,
//! and the Schouten/Nijenhuis-Richardson bracket on skew multilinear maps.
//!
//! All arithmetic is over ℚ; every identity is decided exactly.

pub mod algebra;
pub mod builtins;
pub mod connections;
pub mod derivations;
pub mod dsl;
pub mod error;
pub mod exec;
pub mod forms;
pub mod group;
pub mod hochschild;
pub mod limits;
pub mod linalg;
pub mod random;
pub mod scalar;
pub mod schouten;
mod serial;
pub mod verify;

pub use algebra::{Algebra, Bimodule, Element};
pub use error::{Error, Result};
pub use exec::Execution;
pub use linalg::{Matrix, Subspace};
pub use scalar::Scalar;
