//! Exact combinatorics of sign-vector systems: complexes of oriented
//! matroids, affine oriented matroids and their periodic realizations.

pub mod action;
pub mod axioms;
pub mod error;
pub mod frames;
pub mod lattice;
pub mod minors;
pub mod parallel;
pub mod polynomial;
pub mod poset;
pub mod rational;
pub mod realize;
pub mod semimatroid;
pub mod sign;
pub mod system;
pub mod topegraph;

pub use error::{Error, Result};
pub use sign::{ElemSet, Sign, SignVector};
pub use system::{GroundSet, Reorientation, SignSystem};
