//! Finite-size scaling near the superradiant transition.
//!
//! Close to the critical coupling Rc, the mean photon number of the
//! condensing mode obeys n/η = η^{−κ/ν}·f(η^{1/ν}·r) with r = (R − Rc)/Rc.
//! [`locate_critical`] finds Rc and −κ/ν from the log-log linearity of the
//! data, [`collapse_nu`] fits ν by collapsing the curves, and [`universal_f`]
//! evaluates f from the quartic effective Hamiltonian.

mod collapse;
mod dataset;
mod fit;
mod universal;

pub use collapse::{
    collapse_cost, collapse_nu, collapsed_points, isotonic_fit, smooth_profile, synthetic_points, CollapseResult,
    CollapsedPoint, SyntheticSpec,
};
pub use dataset::{SweepDataset, SweepPoint};
pub use fit::{
    least_squares_line, locate_critical, CriticalEstimate, FitWindow, LineFit, AUTO_WINDOW_SLOPE_TOL, MIN_ETAS,
};
pub use universal::universal_f;

use serde::Serialize;

use crate::error::Result;

/// Default ν interval searched by [`fit_scaling`].
pub const DEFAULT_NU_RANGE: (f64, f64) = (1.0, 2.5);

/// Combined result of the log-log fit and the collapse.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingFit {
    pub rc_est: f64,
    /// Fitted −κ/ν.
    pub slope: f64,
    pub nu: f64,
    /// κ = −slope·ν, positive for a growing order parameter.
    pub kappa: f64,
    pub linfit_residual: f64,
    pub collapse_cost: f64,
    /// `collapse_cost` over the squared spread of the collapsed y values.
    pub relative_collapse_cost: f64,
    /// Smallest η used by the log-log fit.
    pub eta_min: f64,
}

/// [`locate_critical`] followed by [`collapse_nu`] on the full dataset.
pub fn fit_scaling(data: &SweepDataset, window: FitWindow, nu_range: (f64, f64)) -> Result<ScalingFit> {
    let crit = locate_critical(data, window)?;
    let col = collapse_nu(data, crit.rc_est, crit.slope, nu_range)?;
    Ok(ScalingFit {
        rc_est: crit.rc_est,
        slope: crit.slope,
        nu: col.nu,
        kappa: -crit.slope * col.nu,
        linfit_residual: crit.linfit_residual,
        collapse_cost: col.collapse_cost,
        relative_collapse_cost: col.relative_cost(),
        eta_min: crit.eta_min,
    })
}
