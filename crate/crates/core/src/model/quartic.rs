use nalgebra::SymmetricEigen;
use serde::{Deserialize, Serialize};

use super::params::ModelParams;
use super::sparse::SparseOperator;
use crate::error::{invalid, Result};

/// Which bosonic mode condenses: mode 1 for α > β², mode 2 for α < β².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Mode1,
    Mode2,
}

impl Branch {
    pub fn mode_number(self) -> u8 {
        match self {
            Branch::Mode1 => 1,
            Branch::Mode2 => 2,
        }
    }
}

impl std::str::FromStr for Branch {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mode1" | "1" => Ok(Branch::Mode1),
            "mode2" | "2" => Ok(Branch::Mode2),
            _ => Err(invalid("branch", format!("expected mode1 or mode2, got `{s}`"))),
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Branch::Mode1 => "mode1",
            Branch::Mode2 => "mode2",
        })
    }
}

/// Rescaled one-dimensional effective Hamiltonian near the critical point,
/// in units of η^(−4/3):
///
/// * mode 1: ½p² − r′z² + ¼z⁴
/// * mode 2: (α/2)p² − α r′ z² + (α²/4) z⁴
///
/// represented in the harmonic-oscillator basis |k⟩, k = 0..size, of length
/// scale `L`, where z = L(b + b†)/√2 and p = −i(b − b†)/(L√2). The three
/// pieces are stored separately so that r′ can be varied without rebuilding.
#[derive(Debug, Clone)]
pub struct QuarticHamiltonian {
    branch: Branch,
    kinetic_coeff: f64,
    quadratic_coeff: f64,
    quartic_coeff: f64,
    length: f64,
    p2: SparseOperator,
    z2: SparseOperator,
    z4: SparseOperator,
}

pub fn build_quartic_hamiltonian(params: &ModelParams, branch: Branch, trunc_1d: usize) -> Result<QuarticHamiltonian> {
    params.require_degenerate()?;
    if trunc_1d < 2 {
        return Err(invalid("trunc_1d", format!("needs at least 2 oscillator states, got {trunc_1d}")));
    }
    let (kinetic_coeff, quadratic_coeff, quartic_coeff) = match branch {
        Branch::Mode1 => (0.5, 1.0, 0.25),
        Branch::Mode2 => (0.5 * params.alpha, params.alpha, 0.25 * params.alpha * params.alpha),
    };
    // Gaussian trial width minimizing ⟨(c/2)p² + q z⁴⟩ : L⁶ = c / (6q)
    let length = (2.0 * kinetic_coeff / (6.0 * quartic_coeff)).powf(1.0 / 6.0);
    let mut h = QuarticHamiltonian {
        branch,
        kinetic_coeff,
        quadratic_coeff,
        quartic_coeff,
        length,
        p2: SparseOperator::diagonal_from(vec![]),
        z2: SparseOperator::diagonal_from(vec![]),
        z4: SparseOperator::diagonal_from(vec![]),
    };
    h.rebuild(trunc_1d);
    Ok(h)
}

/// ⟨k|(b + b†)²|k′⟩ for k′ ∈ {k, k+2}, unscaled.
fn x2_elements(size: usize) -> Vec<(usize, usize, f64)> {
    let mut t = Vec::new();
    for k in 0..size {
        t.push((k, k, (2 * k + 1) as f64));
        if k + 2 < size {
            let v = (((k + 1) * (k + 2)) as f64).sqrt();
            t.push((k, k + 2, v));
            t.push((k + 2, k, v));
        }
    }
    t
}

impl QuarticHamiltonian {
    fn rebuild(&mut self, size: usize) {
        let l2 = self.length * self.length;
        // z² = (L²/2)(b+b†)², p² = (1/(2L²))(2b†b + 1 − b² − b†²)
        self.z2 = SparseOperator::from_triplets(
            size,
            x2_elements(size).into_iter().map(|(i, j, v)| (i, j, 0.5 * l2 * v)).collect(),
        );
        self.p2 = SparseOperator::from_triplets(
            size,
            x2_elements(size)
                .into_iter()
                .map(|(i, j, v)| (i, j, if i == j { v } else { -v } / (2.0 * l2)))
                .collect(),
        );
        // z⁴ from z² on a basis two states larger, so the top rows are exact
        let big = SparseOperator::from_triplets(
            size + 2,
            x2_elements(size + 2).into_iter().map(|(i, j, v)| (i, j, 0.5 * l2 * v)).collect(),
        );
        let mut t = Vec::new();
        for i in 0..size {
            for j in i..(i + 5).min(size) {
                let mut acc = 0.0;
                for m in i.saturating_sub(2)..=(i + 2).min(size + 1) {
                    acc += big.get(i, m) * big.get(m, j);
                }
                if acc != 0.0 {
                    t.push((i, j, acc));
                    if i != j {
                        t.push((j, i, acc));
                    }
                }
            }
        }
        self.z4 = SparseOperator::from_triplets(size, t);
    }

    /// Overrides the oscillator length scale.
    pub fn with_length_scale(mut self, length: f64) -> Self {
        assert!(length > 0.0 && length.is_finite());
        let size = self.size();
        self.length = length;
        self.rebuild(size);
        self
    }

    /// Multiplies the quartic coefficient; `0.0` leaves a pure harmonic
    /// problem. Test hook.
    pub fn with_quartic_scale(mut self, scale: f64) -> Self {
        self.quartic_coeff *= scale;
        self
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn size(&self) -> usize {
        self.z2.dimension()
    }

    pub fn length_scale(&self) -> f64 {
        self.length
    }

    /// z² in the oscillator basis.
    pub fn z_squared(&self) -> &SparseOperator {
        &self.z2
    }

    /// Hamiltonian matrix at rescaled coupling r′.
    pub fn at(&self, rprime: f64) -> SparseOperator {
        SparseOperator::linear_combination(&[
            (self.kinetic_coeff, &self.p2),
            (-self.quadratic_coeff * rprime, &self.z2),
            (self.quartic_coeff, &self.z4),
        ])
        .expect("pieces share one dimension")
    }

    /// Ground state at r′. The Hamiltonian is even in z, and the ground state
    /// of a one-dimensional problem is nodeless, so only even oscillator
    /// states are diagonalized. Returns the energy and the full-basis vector.
    pub fn ground_state(&self, rprime: f64) -> (f64, Vec<f64>) {
        let even: Vec<usize> = (0..self.size()).step_by(2).collect();
        let block = self.at(rprime).restrict(&even).to_dense();
        let eig = SymmetricEigen::new(block);
        let (k, e) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(k, e)| (k, *e))
            .expect("non-empty block");
        let mut v = vec![0.0; self.size()];
        for (row, &idx) in even.iter().enumerate() {
            v[idx] = eig.eigenvectors[(row, k)];
        }
        (e, v)
    }

    /// ⟨z²⟩ in the ground state at r′.
    pub fn ground_z2(&self, rprime: f64) -> f64 {
        let (_, v) = self.ground_state(rprime);
        self.z2.expectation(&v).expect("matching dimension")
    }
}
