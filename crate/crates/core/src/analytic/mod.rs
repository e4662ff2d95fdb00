//! Closed-form η→∞ results for degenerate lower levels (δ = 0): critical
//! couplings, the phase table, energy derivatives, atomic eigenstates and
//! mean photon numbers, plus a brute-force grid minimizer used to check them.

mod observables;
mod oracle;
mod phase;

pub use observables::{analytic_eigenstate, mean_photon_analytic, AtomicEigenstates, MeanPhotons};
pub use oracle::grid_minimize_surface;
pub use phase::{
    classify_phase, classify_phase_with_band, critical_coupling, critical_coupling_with_band,
    ground_energy_derivatives, CriticalPoint, Degeneracy, EnergyDerivatives, Limits, PhaseClassification,
    PhaseLabel, Regime,
};
