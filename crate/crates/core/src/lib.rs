//! Variable-structure ansatz search for parameterized quantum circuits.
//!
//! A circuit grows by identity-initialized blocks ([`insertion`]), shrinks
//! by rewrite rules ([`simplification`]) and has its angles trained with
//! Adam on an exact statevector simulator ([`simulator`]). The outer loop in
//! [`vans`] accepts or rejects each structural move with a Metropolis rule.

pub mod circuit;
pub mod error;
pub mod insertion;
pub mod problems;
pub mod simplification;
pub mod simulator;
pub mod vans;

pub use error::{Error, Result};
