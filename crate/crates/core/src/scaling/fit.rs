use serde::{Deserialize, Serialize};

use super::collapse::golden_section;
use super::dataset::SweepDataset;
use crate::error::{invalid, Error, Result};

/// Minimum number of η values in a log-log fit.
pub const MIN_ETAS: usize = 4;

/// Slope change below which dropping the smallest η no longer matters in
/// [`FitWindow::Auto`].
pub const AUTO_WINDOW_SLOPE_TOL: f64 = 0.01;

/// Which η values enter the log-log fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub enum FitWindow {
    All,
    /// Only η ≥ the given value.
    MinEta(f64),
    /// Drop the smallest η while doing so moves the fitted slope by at least
    /// [`AUTO_WINDOW_SLOPE_TOL`], never going below [`MIN_ETAS`] values.
    #[default]
    Auto,
}

/// Ordinary least-squares line through (x, y).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Sum of squared residuals.
    pub ssr: f64,
}

pub fn least_squares_line(x: &[f64], y: &[f64]) -> LineFit {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    LineFit { slope, intercept, ssr }
}

/// Result of [`locate_critical`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalEstimate {
    pub rc_est: f64,
    /// Slope of ln(n/η) against ln η at `rc_est`; estimates −κ/ν.
    pub slope: f64,
    pub intercept: f64,
    /// Sum of squared residuals of the line at `rc_est`.
    pub linfit_residual: f64,
    /// Smallest η that entered the fit.
    pub eta_min: f64,
    /// (R, residual) for every coupling on the grid.
    pub residual_profile: Vec<(f64, f64)>,
}

fn lagrange3(x: [f64; 3], y: [f64; 3], t: f64) -> f64 {
    let l0 = (t - x[1]) * (t - x[2]) / ((x[0] - x[1]) * (x[0] - x[2]));
    let l1 = (t - x[0]) * (t - x[2]) / ((x[1] - x[0]) * (x[1] - x[2]));
    let l2 = (t - x[0]) * (t - x[1]) / ((x[2] - x[0]) * (x[2] - x[1]));
    y[0] * l0 + y[1] * l1 + y[2] * l2
}

/// Sample points of the scan that brackets the refinement of Rc.
const REFINE_SCAN: usize = 41;
const REFINE_TOL: f64 = 1e-12;

/// Minimizer of `f` over [a, b]: a uniform scan followed by golden-section
/// search in the bracket of the best sample.
fn minimize_on(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let xs: Vec<f64> = (0..REFINE_SCAN)
        .map(|i| a + (b - a) * i as f64 / (REFINE_SCAN - 1) as f64)
        .collect();
    let k = (0..xs.len())
        .min_by(|&i, &j| f(xs[i]).total_cmp(&f(xs[j])))
        .expect("non-empty scan");
    let lo = xs[k.saturating_sub(1)];
    let hi = xs[(k + 1).min(xs.len() - 1)];
    let t = golden_section(&f, lo, hi, REFINE_TOL * (b - a).abs().max(f64::MIN_POSITIVE));
    if f(t) <= f(xs[k]) {
        t
    } else {
        xs[k]
    }
}

fn locate_on(data: &SweepDataset) -> Result<CriticalEstimate> {
    let etas = data.etas();
    let couplings = data.couplings();
    if etas.len() < MIN_ETAS {
        return Err(Error::InsufficientData(format!(
            "need at least {MIN_ETAS} distinct eta values, got {}",
            etas.len()
        )));
    }
    if couplings.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "need at least 3 coupling values, got {}",
            couplings.len()
        )));
    }
    let ln_eta: Vec<f64> = etas.iter().map(|e| e.ln()).collect();
    let mut ln_n = vec![vec![0.0; etas.len()]; couplings.len()];
    for (ir, row) in ln_n.iter_mut().enumerate() {
        for (ie, v) in row.iter_mut().enumerate() {
            let n = data.value(ir, ie);
            if n <= 0.0 {
                return Err(invalid(
                    "n_over_eta",
                    format!("log-log fit needs positive values, got {n} at (eta={}, R={})", etas[ie], couplings[ir]),
                ));
            }
            *v = n.ln();
        }
    }
    let profile: Vec<(f64, f64)> = couplings
        .iter()
        .zip(&ln_n)
        .map(|(&r, row)| (r, least_squares_line(&ln_eta, row).ssr))
        .collect();
    let k = (0..profile.len())
        .min_by(|&a, &b| profile[a].1.total_cmp(&profile[b].1))
        .expect("non-empty grid");
    if k == 0 || k + 1 == profile.len() {
        return Err(Error::NoInteriorMinimum { coupling: couplings[k] });
    }
    let xs = [couplings[k - 1], couplings[k], couplings[k + 1]];
    // ln N at every η, interpolated along R through the grid neighbours
    let slice_at = |t: f64| -> Vec<f64> {
        (0..etas.len())
            .map(|ie| lagrange3(xs, [ln_n[k - 1][ie], ln_n[k][ie], ln_n[k + 1][ie]], t))
            .collect()
    };
    let rc_est = minimize_on(|t| least_squares_line(&ln_eta, &slice_at(t)).ssr, xs[0], xs[2]);
    let line = least_squares_line(&ln_eta, &slice_at(rc_est));
    Ok(CriticalEstimate {
        rc_est,
        slope: line.slope,
        intercept: line.intercept,
        linfit_residual: line.ssr,
        eta_min: etas[0],
        residual_profile: profile,
    })
}

/// Critical coupling as the R at which ln(n/η) is most nearly linear in ln η.
///
/// Each coupling slice gets an ordinary least-squares line. Around the grid
/// minimum of the residual, ln(n/η) is interpolated quadratically in R
/// through the minimum and its two neighbours, and the residual of the
/// interpolated slice is minimized over that interval. The slope and
/// residual are reported at the minimizer, so a critical point lying on the
/// grid is recovered exactly.
pub fn locate_critical(data: &SweepDataset, window: FitWindow) -> Result<CriticalEstimate> {
    match window {
        FitWindow::All => locate_on(data),
        FitWindow::MinEta(eta_min) => locate_on(&data.with_min_eta(eta_min)?),
        FitWindow::Auto => {
            let mut current = data.clone();
            let mut est = locate_on(&current)?;
            while current.etas().len() > MIN_ETAS {
                let trial = current.with_min_eta(current.etas()[1])?;
                let Ok(next) = locate_on(&trial) else { break };
                if (next.slope - est.slope).abs() < AUTO_WINDOW_SLOPE_TOL {
                    break;
                }
                current = trial;
                est = next;
            }
            Ok(est)
        }
    }
}
