//! Entanglement measures for small multi-qubit states.
//!
//! The crate covers pure-state three-tangle (Cayley hyperdeterminant),
//! Wootters concurrence, negativities and the π-tangle, closed-form tangle
//! families for mixtures of GHZ-basis states, numerical convex-roof
//! minimization over ensemble decompositions, and the four-level Bloch-vector
//! picture of the GHZ+ subspace.
//!
//! Qubit 0 (qubit A) is always the most significant bit of an amplitude index.

pub mod analytic;
pub mod bloch;
pub mod cli;
mod error;
pub mod measures;
pub mod qstate;
pub mod roof;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
