use serde::{Deserialize, Serialize};

use super::phase::{require_off_boundary, Regime};
use crate::error::{Error, Result};
use crate::model::ModelParams;

/// η→∞ mean photon numbers per unit η.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanPhotons {
    pub n1_over_eta: f64,
    pub n2_over_eta: f64,
}

/// Mean photon numbers ⟨a†a⟩/η of the symmetric superposition of the two
/// broken-symmetry ground states, ½(y₊² + y₋²) = y².
pub fn mean_photon_analytic(params: &ModelParams) -> Result<MeanPhotons> {
    params.require_degenerate()?;
    let cp = require_off_boundary(params)?;
    let (alpha, beta, r) = (params.alpha, params.beta, params.coupling);
    if r <= cp.rc {
        return Ok(MeanPhotons {
            n1_over_eta: 0.0,
            n2_over_eta: 0.0,
        });
    }
    let r2 = r * r;
    Ok(match cp.regime {
        Regime::AlphaLessBetaSq => {
            let b2 = beta * beta;
            MeanPhotons {
                n1_over_eta: 0.0,
                n2_over_eta: (b2 * b2 * r2 * r2 - alpha * alpha) / (4.0 * alpha * alpha * b2 * r2),
            }
        }
        _ => MeanPhotons {
            n1_over_eta: (r2 * r2 - 1.0) / (4.0 * r2),
            n2_over_eta: 0.0,
        },
    })
}

/// The ± atomic eigenvectors of the lowest eigenvalue of M at the two
/// broken-symmetry minima, components on (|1⟩, |2⟩, |3⟩).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomicEigenstates {
    pub plus: [f64; 3],
    pub minus: [f64; 3],
}

/// Closed-form atomic ground eigenvectors in the superradiant phases. The
/// dark level carries a zero component: |1⟩ for α < β², |2⟩ for α > β².
pub fn analytic_eigenstate(params: &ModelParams) -> Result<AtomicEigenstates> {
    params.require_degenerate()?;
    let cp = require_off_boundary(params)?;
    let r = params.coupling;
    if r <= cp.rc {
        return Err(Error::UnsupportedRegime(format!(
            "normal phase (R = {r} <= Rc = {}) has no superradiant eigenstate",
            cp.rc
        )));
    }
    let plus = match cp.regime {
        Regime::AlphaLessBetaSq => {
            let b2r2 = params.beta * params.beta * r * r;
            [
                0.0,
                -((b2r2 + params.alpha) / (2.0 * b2r2)).sqrt(),
                ((b2r2 - params.alpha) / (2.0 * b2r2)).sqrt(),
            ]
        }
        _ => {
            let r2 = r * r;
            [-((r2 + 1.0) / (2.0 * r2)).sqrt(), 0.0, ((r2 - 1.0) / (2.0 * r2)).sqrt()]
        }
    };
    Ok(AtomicEigenstates {
        plus,
        minus: plus.map(|c| -c),
    })
}
