use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::model::Branch;

/// One finite-η observation of the order-parameter mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub eta: f64,
    pub coupling: f64,
    /// ⟨a†a⟩/η of the condensing mode.
    pub n_over_eta: f64,
}

/// Rectangular (η × R) grid of mean photon numbers.
///
/// Both axes are stored sorted ascending; `value(i_r, i_eta)` addresses the
/// grid. Points may be supplied in any order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepDataset {
    branch: Branch,
    alpha: f64,
    beta: f64,
    etas: Vec<f64>,
    couplings: Vec<f64>,
    values: Vec<f64>,
}

fn sorted_distinct(mut xs: Vec<f64>) -> Vec<f64> {
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

impl SweepDataset {
    pub fn new(branch: Branch, alpha: f64, beta: f64, points: &[SweepPoint]) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(invalid("alpha", format!("must be positive and finite, got {alpha}")));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(invalid("beta", format!("must be positive and finite, got {beta}")));
        }
        for p in points {
            if !(p.eta > 0.0 && p.eta.is_finite()) {
                return Err(invalid("eta", format!("must be positive and finite, got {}", p.eta)));
            }
            if !(p.coupling >= 0.0 && p.coupling.is_finite()) {
                return Err(invalid("coupling", format!("must be non-negative and finite, got {}", p.coupling)));
            }
            if !(p.n_over_eta >= 0.0 && p.n_over_eta.is_finite()) {
                return Err(invalid(
                    "n_over_eta",
                    format!("must be non-negative and finite, got {} at (eta={}, R={})", p.n_over_eta, p.eta, p.coupling),
                ));
            }
        }
        let etas = sorted_distinct(points.iter().map(|p| p.eta).collect());
        let couplings = sorted_distinct(points.iter().map(|p| p.coupling).collect());
        if etas.is_empty() {
            return Err(Error::InsufficientData("dataset has no points".into()));
        }
        let cells = etas.len() * couplings.len();
        if points.len() != cells {
            return Err(Error::InsufficientData(format!(
                "grid is not rectangular: {} points for {} eta x {} coupling values",
                points.len(),
                etas.len(),
                couplings.len()
            )));
        }
        let mut values = vec![f64::NAN; cells];
        for p in points {
            let ie = etas.binary_search_by(|x| x.total_cmp(&p.eta)).expect("eta on grid");
            let ir = couplings.binary_search_by(|x| x.total_cmp(&p.coupling)).expect("coupling on grid");
            let slot = &mut values[ir * etas.len() + ie];
            if !slot.is_nan() {
                return Err(Error::InsufficientData(format!(
                    "duplicate point at (eta={}, R={})",
                    p.eta, p.coupling
                )));
            }
            *slot = p.n_over_eta;
        }
        Ok(Self {
            branch,
            alpha,
            beta,
            etas,
            couplings,
            values,
        })
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn etas(&self) -> &[f64] {
        &self.etas
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn value(&self, coupling_index: usize, eta_index: usize) -> f64 {
        self.values[coupling_index * self.etas.len() + eta_index]
    }

    /// All points, ordered by coupling then η.
    pub fn points(&self) -> Vec<SweepPoint> {
        let mut out = Vec::with_capacity(self.values.len());
        for (ir, &coupling) in self.couplings.iter().enumerate() {
            for (ie, &eta) in self.etas.iter().enumerate() {
                out.push(SweepPoint {
                    eta,
                    coupling,
                    n_over_eta: self.value(ir, ie),
                });
            }
        }
        out
    }

    /// Copy restricted to η ≥ `eta_min`.
    pub fn with_min_eta(&self, eta_min: f64) -> Result<Self> {
        let pts: Vec<SweepPoint> = self.points().into_iter().filter(|p| p.eta >= eta_min).collect();
        Self::new(self.branch, self.alpha, self.beta, &pts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(eta: f64, coupling: f64, n: f64) -> SweepPoint {
        SweepPoint {
            eta,
            coupling,
            n_over_eta: n,
        }
    }

    #[test]
    fn sorts_and_indexes_the_grid() {
        let d = SweepDataset::new(
            Branch::Mode1,
            1.2,
            0.8,
            &[pt(20.0, 1.1, 4.0), pt(10.0, 1.0, 1.0), pt(20.0, 1.0, 2.0), pt(10.0, 1.1, 3.0)],
        )
        .unwrap();
        assert_eq!(d.etas(), &[10.0, 20.0]);
        assert_eq!(d.couplings(), &[1.0, 1.1]);
        assert_eq!(d.value(1, 1), 4.0);
        assert_eq!(d.value(0, 1), 2.0);
        assert_eq!(d.points().len(), 4);
        assert_eq!(d.with_min_eta(15.0).unwrap().etas(), &[20.0]);
    }

    #[test]
    fn rejects_holes_duplicates_and_negative_values() {
        let holes = [pt(10.0, 1.0, 1.0), pt(20.0, 1.0, 1.0), pt(10.0, 1.1, 1.0)];
        assert!(SweepDataset::new(Branch::Mode1, 1.0, 1.0, &holes).is_err());
        let dup = [pt(10.0, 1.0, 1.0), pt(10.0, 1.0, 2.0), pt(20.0, 1.1, 1.0), pt(20.0, 1.0, 1.0)];
        assert!(SweepDataset::new(Branch::Mode1, 1.0, 1.0, &dup).is_err());
        assert!(SweepDataset::new(Branch::Mode1, 1.0, 1.0, &[pt(10.0, 1.0, -1e-3)]).is_err());
        assert!(SweepDataset::new(Branch::Mode1, 1.0, 1.0, &[]).is_err());
    }
}
