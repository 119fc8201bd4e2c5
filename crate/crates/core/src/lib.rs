//! Fermionic product channels on n qubits: dense simulation, Gaussian-state
//! calculus, the closed-form Gaussian capacity, majorization checks and an
//! iterative minimum-output-entropy solver.
//!
//! Operators are stored densely, so everything here is meant for small
//! registers: up to [`MAX_MODES`] qubits, and one fewer wherever a state has
//! to be embedded into an extra mode.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod capacity;
pub mod channel;
pub mod cli;
pub mod clifford;
pub mod error;
pub mod gaussian;
pub mod majorization;
pub mod minimizer;
pub mod numerics;
pub mod sampling;
pub mod verify;

pub use error::{Error, Result};

/// Largest supported number of qubits (fermionic modes) for dense operators.
pub const MAX_MODES: usize = 7;
