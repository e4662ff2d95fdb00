use crate::error::{invalid, Error, Result};
use crate::model::{build_quartic_hamiltonian, Branch, ModelParams};

/// Relative agreement required between the `trunc_1d` and `2·trunc_1d`
/// oscillator bases.
const DOUBLING_TOL: f64 = 1e-8;

fn curve(params: &ModelParams, branch: Branch, rprime_grid: &[f64], size: usize) -> Result<Vec<f64>> {
    let h = build_quartic_hamiltonian(params, branch, size)?;
    Ok(rprime_grid.iter().map(|&rp| 0.5 * h.ground_z2(rp)).collect())
}

/// Universal scaling function f(r′) = ½⟨z²⟩ of the quartic effective model.
///
/// Every value is recomputed in a basis of twice `trunc_1d` oscillator
/// states; disagreement beyond a relative 1e-8 is reported as
/// [`Error::NoConvergence`]. The returned values come from the larger basis.
pub fn universal_f(branch: Branch, params: &ModelParams, rprime_grid: &[f64], trunc_1d: usize) -> Result<Vec<(f64, f64)>> {
    if let Some(bad) = rprime_grid.iter().find(|x| !x.is_finite()) {
        return Err(invalid("rprime", format!("must be finite, got {bad}")));
    }
    let coarse = curve(params, branch, rprime_grid, trunc_1d)?;
    let fine = curve(params, branch, rprime_grid, 2 * trunc_1d)?;
    for ((rp, a), b) in rprime_grid.iter().zip(&coarse).zip(&fine) {
        if (a - b).abs() > DOUBLING_TOL * b.abs().max(1.0) {
            return Err(Error::NoConvergence(format!(
                "f({rp}) changed from {a} to {b} when the oscillator basis was doubled from {trunc_1d}"
            )));
        }
    }
    Ok(rprime_grid.iter().copied().zip(fine).collect())
}
