use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::model::ModelParams;

/// Which side of the α = β² line the parameters fall on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    AlphaLessBetaSq,
    AlphaGreaterBetaSq,
    AlphaEqualsBetaSq,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub regime: Regime,
    /// Critical coupling R_c.
    pub rc: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PhaseLabel {
    Normal,
    SuperradiantY1,
    SuperradiantY2,
    BoundaryU1,
}

impl PhaseLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            PhaseLabel::Normal => "Normal",
            PhaseLabel::SuperradiantY1 => "SuperradiantY1",
            PhaseLabel::SuperradiantY2 => "SuperradiantY2",
            PhaseLabel::BoundaryU1 => "BoundaryU1",
        }
    }
}

/// How many η→∞ ground states share the reported energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Degeneracy {
    Unique,
    /// ± pair related by the Z₂ symmetry.
    SignPair,
    /// Ellipse y₁² + β²y₂² = (R⁴ − 1)/(2R²).
    Continuum,
}

/// η→∞ ground-state phase. Order parameters are reported non-negative; for
/// [`PhaseLabel::BoundaryU1`] the point (y₁, 0) on the degenerate ellipse is
/// reported.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseClassification {
    pub label: PhaseLabel,
    pub y1: f64,
    pub y2: f64,
    pub energy: f64,
    pub degeneracy: Degeneracy,
}

fn regime_of(alpha: f64, beta: f64, band: f64) -> Regime {
    let b2 = beta * beta;
    if (alpha - b2).abs() <= band {
        Regime::AlphaEqualsBetaSq
    } else if alpha < b2 {
        Regime::AlphaLessBetaSq
    } else {
        Regime::AlphaGreaterBetaSq
    }
}

fn check_positive(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(invalid("alpha", "must be positive and finite"));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(invalid("beta", "must be positive and finite"));
    }
    Ok(())
}

/// R_c = √(α/β²) when α < β², otherwise 1.
pub fn critical_coupling(alpha: f64, beta: f64) -> Result<CriticalPoint> {
    critical_coupling_with_band(alpha, beta, 0.0)
}

/// As [`critical_coupling`], treating |α − β²| ≤ `band` as the boundary line.
pub fn critical_coupling_with_band(alpha: f64, beta: f64, band: f64) -> Result<CriticalPoint> {
    check_positive(alpha, beta)?;
    let regime = regime_of(alpha, beta, band);
    let rc = match regime {
        Regime::AlphaLessBetaSq => (alpha / (beta * beta)).sqrt(),
        _ => 1.0,
    };
    Ok(CriticalPoint { regime, rc })
}

/// E₀ on the y₂ branch as a function of γ = α/β² and R.
pub(crate) fn energy_y2(gamma: f64, r: f64) -> f64 {
    -0.25 * (gamma / (r * r) + r * r / gamma) + 0.5
}

/// E₀ on the y₁ branch and on the U(1) boundary.
pub(crate) fn energy_y1(r: f64) -> f64 {
    -0.25 * (1.0 / (r * r) + r * r) + 0.5
}

/// η→∞ phase and ground state for degenerate lower levels.
pub fn classify_phase(params: &ModelParams) -> Result<PhaseClassification> {
    classify_phase_with_band(params, 0.0)
}

/// As [`classify_phase`] with a tolerance band around α = β².
pub fn classify_phase_with_band(params: &ModelParams, band: f64) -> Result<PhaseClassification> {
    params.require_degenerate()?;
    let (alpha, beta, r) = (params.alpha, params.beta, params.coupling);
    let cp = critical_coupling_with_band(alpha, beta, band)?;
    let normal = PhaseClassification {
        label: PhaseLabel::Normal,
        y1: 0.0,
        y2: 0.0,
        energy: 0.0,
        degeneracy: Degeneracy::Unique,
    };
    if r <= cp.rc {
        return Ok(normal);
    }
    let r2 = r * r;
    Ok(match cp.regime {
        Regime::AlphaLessBetaSq => {
            let b2 = beta * beta;
            let y2 = ((b2 * b2 * r2 * r2 - alpha * alpha) / (2.0 * alpha * alpha * b2 * r2)).sqrt();
            PhaseClassification {
                label: PhaseLabel::SuperradiantY2,
                y1: 0.0,
                y2,
                energy: energy_y2(alpha / b2, r),
                degeneracy: Degeneracy::SignPair,
            }
        }
        Regime::AlphaGreaterBetaSq => PhaseClassification {
            label: PhaseLabel::SuperradiantY1,
            y1: ((r2 * r2 - 1.0) / (2.0 * r2)).sqrt(),
            y2: 0.0,
            energy: energy_y1(r),
            degeneracy: Degeneracy::SignPair,
        },
        Regime::AlphaEqualsBetaSq => PhaseClassification {
            label: PhaseLabel::BoundaryU1,
            y1: ((r2 * r2 - 1.0) / (2.0 * r2)).sqrt(),
            y2: 0.0,
            energy: energy_y1(r),
            degeneracy: Degeneracy::Continuum,
        },
    })
}

/// Left and right limits of a quantity that may jump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Limits {
    pub left: f64,
    pub right: f64,
}

impl Limits {
    fn both(v: f64) -> Self {
        Self { left: v, right: v }
    }

    pub fn jump(&self) -> f64 {
        self.right - self.left
    }

    pub fn is_continuous(&self) -> bool {
        self.left == self.right
    }
}

/// ∂²E₀/∂R² at fixed γ and ∂E₀/∂γ at fixed R. At R = R_c (resp. on the
/// α = β² line) the two one-sided limits differ; elsewhere they coincide.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyDerivatives {
    pub d2e_dr2: Limits,
    pub de_dgamma: Limits,
}

#[derive(Clone, Copy)]
enum Branch {
    Normal,
    Y1,
    Y2,
}

fn d2e_dr2_on(branch: Branch, gamma: f64, r: f64) -> f64 {
    match branch {
        Branch::Normal => 0.0,
        // d²/dR² of −¼(γ/R² + R²/γ) + ½
        Branch::Y2 => -1.5 * gamma / r.powi(4) - 0.5 / gamma,
        Branch::Y1 => -1.5 / r.powi(4) - 0.5,
    }
}

fn de_dgamma_on(branch: Branch, gamma: f64, r: f64) -> f64 {
    match branch {
        Branch::Y2 => -0.25 * (1.0 / (r * r) - r * r / (gamma * gamma)),
        _ => 0.0,
    }
}

/// Closed-form derivatives of the η→∞ ground-state energy.
pub fn ground_energy_derivatives(params: &ModelParams) -> Result<EnergyDerivatives> {
    params.require_degenerate()?;
    let gamma = params.gamma();
    let r = params.coupling;
    let cp = critical_coupling(params.alpha, params.beta)?;

    // Along R at fixed γ: superradiant strictly above R_c.
    let sr_branch = match cp.regime {
        Regime::AlphaLessBetaSq => Branch::Y2,
        _ => Branch::Y1,
    };
    let left_r = if r > cp.rc { sr_branch } else { Branch::Normal };
    let right_r = if r >= cp.rc { sr_branch } else { Branch::Normal };
    let d2e_dr2 = if r == cp.rc {
        Limits {
            left: d2e_dr2_on(left_r, gamma, r),
            right: d2e_dr2_on(right_r, gamma, r),
        }
    } else {
        Limits::both(d2e_dr2_on(left_r, gamma, r))
    };

    // Along γ at fixed R: the y₂ phase occupies γ < min(1, R²), the y₁ phase
    // γ > 1 with R > 1.
    let side = |g_lo: bool| -> Branch {
        // g_lo: evaluate just below gamma, otherwise just above
        let y2 = if g_lo { gamma <= 1.0 && gamma <= r * r } else { gamma < 1.0 && gamma < r * r };
        let y1 = if g_lo { gamma > 1.0 } else { gamma >= 1.0 } && r > 1.0;
        if y2 {
            Branch::Y2
        } else if y1 {
            Branch::Y1
        } else {
            Branch::Normal
        }
    };
    let de_dgamma = Limits {
        left: de_dgamma_on(side(true), gamma, r),
        right: de_dgamma_on(side(false), gamma, r),
    };
    Ok(EnergyDerivatives { d2e_dr2, de_dgamma })
}

pub(crate) fn require_off_boundary(params: &ModelParams) -> Result<CriticalPoint> {
    let cp = critical_coupling(params.alpha, params.beta)?;
    if cp.regime == Regime::AlphaEqualsBetaSq {
        return Err(Error::UnsupportedRegime(
            "alpha = beta^2: the ground state is a degenerate continuum".into(),
        ));
    }
    Ok(cp)
}
