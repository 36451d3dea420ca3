//! Contextuality of particle identity, mechanized.
//!
//! The crate is split along the lines of the argument it reproduces:
//!
//! - [`qcore`]: a tiny dense three-qubit kernel that builds the GHZ state and
//!   evaluates the four commuting Pauli contexts `XYY`, `YXY`, `YYX`, `XXX`.
//! - [`indist`]: the same state written as three indistinguishable bosons on a
//!   mode ⊗ spin single-particle space, in first and second quantization.
//! - [`hvsearch`]: exhaustive classification of hidden-variable model families
//!   (value-based, contextual, identity-based, hybrid) plus a GF(2) parity
//!   oracle.
//! - [`hom`]: two-particle beamsplitter interference.
//! - [`report`] and [`checks`]: serializable reports and the reproduction
//!   checks shared by the CLI and the browser demo.

pub mod checks;
pub mod error;
pub mod hom;
pub mod hvsearch;
pub mod indist;
pub mod qcore;
pub mod report;

pub use error::{Error, Result};

/// Absolute tolerance used for every floating-point equality check.
pub const TOLERANCE: f64 = 1e-12;
