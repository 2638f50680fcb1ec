//! Coherence of two-level atoms coupled to a fluctuating vacuum field,
//! optionally near a perfectly reflecting plane boundary.
//!
//! Closed-form trajectories live in [`single_qubit`] and [`two_qubit`];
//! [`lindblad_oracle`] integrates the master equation numerically to check them.

pub mod boundary;
pub mod cli;
pub mod error;
pub mod lindblad_oracle;
pub mod measures;
pub mod qmath;
pub mod single_qubit;
pub mod two_qubit;

pub use error::{Error, Result};
