//! Numerical and closed-form toolkit for the two-mode three-level quantum
//! Rabi model: a single Λ-type atom (levels |1⟩, |2⟩, |3⟩, with |1⟩↔|2⟩
//! forbidden) coupled beyond the rotating-wave approximation to two bosonic
//! modes.
//!
//! The crate is organised in four layers:
//!
//! * [`model`]: Hamiltonian representations. The finite-η sparse operator in
//!   the truncated Fock ⊗ atom basis, the η→∞ energy surface and its 3×3
//!   atomic matrix, the one-dimensional quartic effective Hamiltonians, and the
//!   parity operator.
//! * [`analytic`]: the η→∞ phase diagram, order parameters, energies and
//!   their derivatives, atomic eigenstates and mean photon numbers.
//! * [`eigensolver`]: thick-restart Lanczos ground-state solver with adaptive
//!   per-mode Fock truncation.
//! * [`scaling`]: critical-point location from log-log linearity, data
//!   collapse for ν, and the universal scaling function.

pub mod analytic;
pub mod eigensolver;
mod error;
pub mod model;
pub mod scaling;

pub use error::{Error, Result};
