//! Representation-theoretic machinery for the one-dimensional Schrödinger equation with
//! sl2-symmetric potentials: exact operator identities, closed-form K-type solutions,
//! ladder structure on truncated weight lattices, and time-dependent reductions.

pub mod error;
pub mod fd;
pub mod grid;
pub mod weyl;

pub use error::{Error, Result};
pub mod hyperfun;
pub mod ktypes;
pub mod liealg;
pub mod structure;
pub mod tdreduce;
