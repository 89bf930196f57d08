//! Exact-arithmetic toolkit for Delzant polytopes.
//!
//! Everything is computed over arbitrary-precision rationals: vertex
//! enumeration, lattice-normalized volumes and moments, the characteristic
//! number of the circle action generated by an integral mass vector, and
//! mass-linearity analysis over the chamber of a combinatorial type.

pub mod cli;
pub mod error;
pub mod exact;
pub mod families;
pub mod integrate;
pub mod invariant;
pub mod masslinear;
pub mod polytope;

pub use error::{Error, Result};
