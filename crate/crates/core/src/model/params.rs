use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Dimensionless parameters of one Hamiltonian instance.
///
/// All energies are measured in units of the atomic splitting Δ = ε₃ − ε₁
/// with ε₁ = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Mode-frequency ratio ω₂/ω₁.
    pub alpha: f64,
    /// Coupling ratio g₂/g₁.
    pub beta: f64,
    /// Lower-level splitting (ε₂ − ε₁)/Δ.
    pub delta: f64,
    /// Coupling R = 2g₁/√(ω₁Δ).
    pub coupling: f64,
    /// Frequency ratio η = Δ/ω₁.
    pub eta: f64,
}

/// Pre-scaling inputs of the model: level energies, mode frequencies and
/// couplings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub eps1: f64,
    pub eps2: f64,
    pub eps3: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub g1: f64,
    pub g2: f64,
}

impl ModelParams {
    pub fn new(alpha: f64, beta: f64, delta: f64, coupling: f64, eta: f64) -> Result<Self> {
        let p = Self {
            alpha,
            beta,
            delta,
            coupling,
            eta,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters with degenerate lower levels (δ = 0).
    pub fn degenerate(alpha: f64, beta: f64, coupling: f64, eta: f64) -> Result<Self> {
        Self::new(alpha, beta, 0.0, coupling, eta)
    }

    /// Builds the dimensionless parameters from level energies, frequencies
    /// and couplings. ε₁ is taken as the energy origin.
    pub fn from_physical(p: &PhysicalParams) -> Result<Self> {
        let splitting = p.eps3 - p.eps1;
        if !(splitting > 0.0) {
            return Err(invalid("eps3", "requires eps3 > eps1"));
        }
        if !(p.omega1 > 0.0) {
            return Err(invalid("omega1", "must be positive"));
        }
        if p.g1 == 0.0 {
            return Err(invalid("g1", "must be non-zero to define beta = g2/g1"));
        }
        Self::new(
            p.omega2 / p.omega1,
            p.g2 / p.g1,
            (p.eps2 - p.eps1) / splitting,
            2.0 * p.g1 / (p.omega1 * splitting).sqrt(),
            splitting / p.omega1,
        )
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("delta", self.delta),
            ("R", self.coupling),
            ("eta", self.eta),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(invalid(name, format!("must be finite, got {v}")));
            }
        }
        if self.alpha <= 0.0 {
            return Err(invalid("alpha", "must be > 0"));
        }
        if self.beta <= 0.0 {
            return Err(invalid("beta", "must be > 0"));
        }
        if self.eta <= 0.0 {
            return Err(invalid("eta", "must be > 0"));
        }
        if self.coupling < 0.0 {
            return Err(invalid("R", "must be >= 0"));
        }
        if self.delta < 0.0 {
            return Err(invalid("delta", "must be >= 0"));
        }
        Ok(())
    }

    /// γ = α/β².
    pub fn gamma(&self) -> f64 {
        self.alpha / (self.beta * self.beta)
    }

    pub fn with_coupling(mut self, coupling: f64) -> Self {
        self.coupling = coupling;
        self
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    /// Rejects δ ≠ 0 for the closed-form evaluators.
    pub(crate) fn require_degenerate(&self) -> Result<()> {
        self.validate()?;
        if self.delta != 0.0 {
            return Err(Error::NonDegenerateLevels(self.delta));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_is_alpha_over_beta_squared() {
        let p = ModelParams::degenerate(0.8, 1.2, 1.0, 10.0).unwrap();
        assert_eq!(p.gamma(), 0.8 / (1.2 * 1.2));
    }

    #[test]
    fn rejects_invalid_fields() {
        assert!(ModelParams::new(0.0, 1.0, 0.0, 1.0, 1.0).is_err());
        assert!(ModelParams::new(1.0, -1.0, 0.0, 1.0, 1.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, -0.1, 1.0, 1.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, 0.0, -1.0, 1.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, 0.0, 1.0, 0.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, 0.0, f64::NAN, 1.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, 0.0, 1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn physical_conversion() {
        let phys = PhysicalParams {
            eps1: 0.5,
            eps2: 1.0,
            eps3: 2.5,
            omega1: 0.02,
            omega2: 0.03,
            g1: 0.1,
            g2: 0.15,
        };
        let p = ModelParams::from_physical(&phys).unwrap();
        assert!((p.alpha - 1.5).abs() < 1e-15);
        assert!((p.beta - 1.5).abs() < 1e-15);
        assert!((p.delta - 0.25).abs() < 1e-15);
        assert!((p.eta - 100.0).abs() < 1e-12);
        assert!((p.coupling - 0.2 / (0.04f64).sqrt()).abs() < 1e-12);
    }
}
