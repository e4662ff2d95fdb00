//! Ground states of the finite-η Hamiltonian.

mod ground;
mod lanczos;

pub use ground::{solve_at_truncation, solve_ground_state, BasisScale, GroundStateResult, SolverConfig};
pub use lanczos::{lowest_eigenpair, Eigenpair, LanczosConfig};

use crate::error::{Error, Result};
use crate::model::SparseOperator;

/// Sparse product `op · v`.
pub fn matvec(op: &SparseOperator, v: &[f64]) -> Result<Vec<f64>> {
    op.matvec(v)
}

/// ⟨v|O|v⟩ for the state of a solve.
pub fn observe(result: &GroundStateResult, observable: &SparseOperator) -> Result<f64> {
    if observable.dimension() != result.vector.len() {
        return Err(Error::DimensionMismatch {
            expected: result.vector.len(),
            found: observable.dimension(),
        });
    }
    observable.expectation(&result.vector)
}
