use super::basis::{BasisState, Level, OscillatorScales, TruncationSpec, DEFAULT_MAX_DIMENSION};
use super::params::ModelParams;
use super::sparse::SparseOperator;
use crate::error::{invalid, Result};

/// Matrix of the dimensionless Hamiltonian (energies in units of Δ)
///
/// H′ = δ|2⟩⟨2| + |3⟩⟨3| + (a₁†a₁ + α a₂†a₂)/η
///      + R/(2√η) [A₁(a₁† + a₁) + β A₂(a₂† + a₂)]
///
/// with A₁ = |1⟩⟨3| + h.c. and A₂ = |2⟩⟨3| + h.c., in the basis ordered as
/// documented on [`TruncationSpec`]. Truncations above
/// [`DEFAULT_MAX_DIMENSION`] are rejected.
pub fn build_hamiltonian(params: &ModelParams, trunc: &TruncationSpec) -> Result<SparseOperator> {
    build_hamiltonian_capped(params, trunc, DEFAULT_MAX_DIMENSION)
}

/// [`build_hamiltonian`] with an explicit dimension cap.
pub fn build_hamiltonian_capped(
    params: &ModelParams,
    trunc: &TruncationSpec,
    max_dimension: usize,
) -> Result<SparseOperator> {
    build_hamiltonian_scaled(params, trunc, &OscillatorScales::FOCK, max_dimension)
}

/// One mode's quadratic operator in the oscillator basis of width `s`:
/// `(diagonal(k), coefficient of |k⟩⟨k+2| and its transpose)`.
fn quadratic_elements(kind: Quadratic, s: f64, k: usize) -> (f64, f64) {
    let (xx, pp) = (0.5 * s * s, 0.5 / (s * s));
    let d = (2 * k + 1) as f64;
    let o = (((k + 1) * (k + 2)) as f64).sqrt();
    match kind {
        Quadratic::X2 => (xx * d, xx * o),
        Quadratic::P2 => (pp * d, -pp * o),
        // a†a = (x² + p² − 1)/2
        Quadratic::Number => (0.5 * ((xx + pp) * d - 1.0), 0.5 * (xx - pp) * o),
    }
}

#[derive(Clone, Copy)]
enum Quadratic {
    X2,
    P2,
    Number,
}

/// [`build_hamiltonian`] in the oscillator bases of [`OscillatorScales`].
///
/// With widths s₁, s₂ the photon terms a†a = (x² + p² − 1)/2 acquire
/// |k⟩ ↔ |k+2⟩ elements proportional to s² − 1/s², and a + a† = s(b + b†).
pub fn build_hamiltonian_scaled(
    params: &ModelParams,
    trunc: &TruncationSpec,
    scales: &OscillatorScales,
    max_dimension: usize,
) -> Result<SparseOperator> {
    params.validate()?;
    OscillatorScales::new(scales.s1, scales.s2)?;
    let dim = trunc.checked_against(max_dimension)?;
    let t = *trunc;

    let level_energy = |l: Level| match l {
        Level::One => 0.0,
        Level::Two => params.delta,
        Level::Three => 1.0,
    };
    let w1 = 1.0 / params.eta;
    let w2 = params.alpha / params.eta;
    let diagonal = t.states().enumerate().map(|(i, st)| {
        let (d1, _) = quadratic_elements(Quadratic::Number, scales.s1, st.n1);
        let (d2, _) = quadratic_elements(Quadratic::Number, scales.s2, st.n2);
        (i, level_energy(st.level) + w1 * d1 + w2 * d2)
    });

    let mut upper = Vec::new();
    if !scales.is_fock() {
        for st in t.states() {
            let i = t.index(st);
            if st.n1 + 2 <= t.n1_max {
                let (_, o) = quadratic_elements(Quadratic::Number, scales.s1, st.n1);
                if o != 0.0 {
                    upper.push((i, t.index(BasisState { n1: st.n1 + 2, ..st }), w1 * o));
                }
            }
            if st.n2 + 2 <= t.n2_max {
                let (_, o) = quadratic_elements(Quadratic::Number, scales.s2, st.n2);
                if o != 0.0 {
                    upper.push((i, t.index(BasisState { n2: st.n2 + 2, ..st }), w2 * o));
                }
            }
        }
    }

    let c = params.coupling / (2.0 * params.eta.sqrt());
    if c != 0.0 {
        for n1 in 0..=t.n1_max {
            for n2 in 0..=t.n2_max {
                // mode 1 drives |1⟩ ↔ |3⟩
                if n1 < t.n1_max {
                    let amp = c * scales.s1 * ((n1 + 1) as f64).sqrt();
                    for (from, to) in [(Level::One, Level::Three), (Level::Three, Level::One)] {
                        upper.push((
                            t.index(BasisState { level: from, n1, n2 }),
                            t.index(BasisState { level: to, n1: n1 + 1, n2 }),
                            amp,
                        ));
                    }
                }
                // mode 2 drives |2⟩ ↔ |3⟩
                if n2 < t.n2_max {
                    let amp = c * params.beta * scales.s2 * ((n2 + 1) as f64).sqrt();
                    for (from, to) in [(Level::Two, Level::Three), (Level::Three, Level::Two)] {
                        upper.push((
                            t.index(BasisState { level: from, n1, n2 }),
                            t.index(BasisState { level: to, n1, n2: n2 + 1 }),
                            amp,
                        ));
                    }
                }
            }
        }
    }
    Ok(SparseOperator::from_upper(dim, diagonal, upper))
}

/// Parity eigenvalue of a basis state: (−1)^(n₁+n₂) times +1 on |1⟩, |2⟩
/// and −1 on |3⟩.
pub fn parity_of(s: BasisState) -> i8 {
    let photon = if (s.n1 + s.n2) % 2 == 0 { 1 } else { -1 };
    match s.level {
        Level::Three => -photon,
        _ => photon,
    }
}

/// Diagonal parity operator Π. Each coupling term changes one photon number
/// by one and flips between {|1⟩, |2⟩} and |3⟩, so Π commutes with H′ in any
/// truncation.
pub fn build_parity(trunc: &TruncationSpec) -> SparseOperator {
    SparseOperator::diagonal_from(trunc.states().map(|s| parity_of(s) as f64).collect())
}

/// Basis indices of the parity sector with eigenvalue `sign` (±1), in
/// increasing order.
pub fn parity_sector(trunc: &TruncationSpec, sign: i8) -> Vec<usize> {
    trunc
        .states()
        .enumerate()
        .filter(|(_, s)| parity_of(*s) == sign)
        .map(|(i, _)| i)
        .collect()
}

/// Photon-number operator a†a of mode 1 or 2.
pub fn build_number_operator(trunc: &TruncationSpec, mode: u8) -> Result<SparseOperator> {
    build_number_operator_scaled(trunc, mode, &OscillatorScales::FOCK)
}

fn mode_operator(trunc: &TruncationSpec, mode: u8, scales: &OscillatorScales, kind: Quadratic) -> Result<SparseOperator> {
    if mode != 1 && mode != 2 {
        return Err(invalid("mode", format!("expected 1 or 2, got {mode}")));
    }
    OscillatorScales::new(scales.s1, scales.s2)?;
    let s = scales.of_mode(mode);
    let t = *trunc;
    let (k_of, k_max) = if mode == 1 {
        ((|st: &BasisState| st.n1) as fn(&BasisState) -> usize, t.n1_max)
    } else {
        ((|st: &BasisState| st.n2) as fn(&BasisState) -> usize, t.n2_max)
    };
    let diagonal = t.states().enumerate().map(|(i, st)| (i, quadratic_elements(kind, s, k_of(&st)).0));
    let mut upper = Vec::new();
    if !matches!(kind, Quadratic::Number) || s != 1.0 {
        for st in t.states() {
            let k = k_of(&st);
            if k + 2 <= k_max {
                let other = if mode == 1 {
                    BasisState { n1: k + 2, ..st }
                } else {
                    BasisState { n2: k + 2, ..st }
                };
                upper.push((t.index(st), t.index(other), quadratic_elements(kind, s, k).1));
            }
        }
    }
    Ok(SparseOperator::from_upper(t.dimension(), diagonal, upper))
}

/// Photon-number operator a†a of mode 1 or 2 in the oscillator basis of
/// width `scales.s{mode}`.
pub fn build_number_operator_scaled(trunc: &TruncationSpec, mode: u8, scales: &OscillatorScales) -> Result<SparseOperator> {
    mode_operator(trunc, mode, scales, Quadratic::Number)
}

/// Squared quadratures (x², p²) of mode 1 or 2, with a = (x + ip)/√2.
pub fn build_quadrature_squares(
    trunc: &TruncationSpec,
    mode: u8,
    scales: &OscillatorScales,
) -> Result<(SparseOperator, SparseOperator)> {
    Ok((
        mode_operator(trunc, mode, scales, Quadratic::X2)?,
        mode_operator(trunc, mode, scales, Quadratic::P2)?,
    ))
}
