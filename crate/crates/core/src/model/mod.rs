//! Hamiltonian representations of the two-mode three-level Rabi model.

mod basis;
mod hamiltonian;
mod params;
mod quartic;
mod sparse;
mod surface;

pub use basis::{BasisState, Level, OscillatorScales, TruncationSpec, DEFAULT_MAX_DIMENSION};
pub use hamiltonian::{
    build_hamiltonian, build_hamiltonian_capped, build_hamiltonian_scaled, build_number_operator,
    build_number_operator_scaled, build_parity, build_quadrature_squares, parity_of, parity_sector,
};
pub use params::{ModelParams, PhysicalParams};
pub use quartic::{build_quartic_hamiltonian, Branch, QuarticHamiltonian};
pub use sparse::SparseOperator;
pub use surface::{build_m_matrix, energy_surface, lowest_eigenpair, EnergySurfacePoint};
pub(crate) use surface::surface_unchecked;
