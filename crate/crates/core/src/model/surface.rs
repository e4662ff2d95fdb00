use nalgebra::{Matrix3, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::params::ModelParams;
use crate::error::Result;

/// A point of the η→∞ energy landscape.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergySurfacePoint {
    pub y1: f64,
    pub y2: f64,
    pub energy: f64,
}

/// Ground-state energy of the η→∞ Hamiltonian at fixed field displacements
/// (y₁, y₂), for degenerate lower levels:
///
/// E(y₁, y₂) = ½(y₁² + α y₂²) + ½[1 − √(1 + 2R²(y₁² + β² y₂²))]
pub fn energy_surface(params: &ModelParams, y1: f64, y2: f64) -> Result<f64> {
    params.require_degenerate()?;
    Ok(surface_unchecked(params, y1, y2))
}

#[inline]
pub(crate) fn surface_unchecked(params: &ModelParams, y1: f64, y2: f64) -> f64 {
    let r2 = params.coupling * params.coupling;
    let s = y1 * y1 + params.beta * params.beta * y2 * y2;
    0.5 * (y1 * y1 + params.alpha * y2 * y2) + 0.5 * (1.0 - (1.0 + 2.0 * r2 * s).sqrt())
}

/// Atomic matrix M with H_eff = ½(y₁² + α y₂²) + ½M:
///
/// ```text
///     ⎡ 0      0      √2·R·y₁ ⎤
/// M = ⎢ 0      0      √2·βR·y₂⎥
///     ⎣ √2·R·y₁ √2·βR·y₂  2    ⎦
/// ```
pub fn build_m_matrix(params: &ModelParams, y1: f64, y2: f64) -> Result<Matrix3<f64>> {
    params.require_degenerate()?;
    let s2 = std::f64::consts::SQRT_2;
    let a = s2 * params.coupling * y1;
    let b = s2 * params.beta * params.coupling * y2;
    Ok(Matrix3::new(0.0, 0.0, a, 0.0, 0.0, b, a, b, 2.0))
}

/// Lowest eigenpair of a symmetric 3×3 matrix.
pub fn lowest_eigenpair(m: &Matrix3<f64>) -> (f64, [f64; 3]) {
    let eig = SymmetricEigen::new(*m);
    let (k, _) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("3 eigenvalues");
    let v = eig.eigenvectors.column(k);
    (eig.eigenvalues[k], [v[0], v[1], v[2]])
}
