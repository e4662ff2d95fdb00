use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::lanczos::{lowest_eigenpair, LanczosConfig};
use crate::error::{invalid, Error, Result};
use crate::model::{
    build_hamiltonian_scaled, build_number_operator_scaled, build_quadrature_squares, parity_sector, ModelParams,
    OscillatorScales, SparseOperator, TruncationSpec, DEFAULT_MAX_DIMENSION,
};

/// Oscillator basis used for the two photon modes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub enum BasisScale {
    /// Photon number states.
    #[default]
    Fock,
    Fixed(OscillatorScales),
    /// Widths matched to the ground state, s⁴ = ⟨x²⟩/⟨p²⟩ per mode, found by
    /// repeated solves at the initial truncation before the cutoffs grow.
    Auto,
}

/// Width-matching passes in [`BasisScale::Auto`].
const MAX_SCALE_PASSES: usize = 12;
/// Relative width change below which matching stops.
const SCALE_TOL: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Residual tolerance of the Lanczos iteration, relative to max(1, |E₀|).
    pub tol_energy: f64,
    pub max_krylov: usize,
    pub max_restarts: usize,
    /// Multiplicative growth of a Fock cutoff between truncation steps.
    pub trunc_growth: f64,
    /// Relative change of E₀, ⟨n₁⟩ and ⟨n₂⟩ between successive truncations
    /// below which the truncation counts as converged.
    pub trunc_tol: f64,
    /// Probability allowed in the top Fock levels of each mode.
    pub tail_tol: f64,
    pub initial_trunc: TruncationSpec,
    pub max_dimension: usize,
    pub max_trunc_steps: usize,
    pub seed: u64,
    pub basis_scale: BasisScale,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol_energy: 1e-10,
            max_krylov: 64,
            max_restarts: 200,
            trunc_growth: 1.5,
            trunc_tol: 1e-6,
            tail_tol: 1e-10,
            initial_trunc: TruncationSpec::new(8, 8),
            max_dimension: DEFAULT_MAX_DIMENSION,
            max_trunc_steps: 40,
            seed: 0,
            basis_scale: BasisScale::Fock,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol_energy > 0.0) {
            return Err(invalid("tol_energy", "must be > 0"));
        }
        if !(self.trunc_growth > 1.0) {
            return Err(invalid("trunc_growth", "must be > 1"));
        }
        if !(self.trunc_tol > 0.0) {
            return Err(invalid("trunc_tol", "must be > 0"));
        }
        if !(self.tail_tol > 0.0) {
            return Err(invalid("tail_tol", "must be > 0"));
        }
        if self.max_krylov < 2 {
            return Err(invalid("max_krylov", "must be >= 2"));
        }
        if let BasisScale::Fixed(s) = self.basis_scale {
            OscillatorScales::new(s.s1, s.s2)?;
        }
        Ok(())
    }

    fn lanczos(&self) -> LanczosConfig {
        LanczosConfig {
            tol: self.tol_energy,
            max_krylov: self.max_krylov,
            max_restarts: self.max_restarts,
        }
    }
}

/// Lowest eigenpair of H′ with its photon numbers and parity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundStateResult {
    pub energy: f64,
    /// Normalized state in the basis order of [`TruncationSpec`], in the
    /// oscillator bases given by `scales`; the largest-magnitude component
    /// is positive.
    pub vector: Vec<f64>,
    pub n1: f64,
    pub n2: f64,
    pub parity: f64,
    pub trunc_used: TruncationSpec,
    pub scales: OscillatorScales,
    /// Sparse products spent over all truncation steps.
    pub iterations: usize,
    pub trunc_steps: usize,
    pub residual: f64,
    /// Probability in the top basis levels of each mode.
    pub tail1: f64,
    pub tail2: f64,
    pub converged: bool,
}

/// Top-level window used for the tail mass: the last ⌈(n_max+1)/10⌉ levels,
/// at least two.
fn tail_window(n_max: usize) -> usize {
    ((n_max + 1).div_ceil(10)).max(2).min(n_max + 1)
}

/// (⟨n₁⟩, ⟨n₂⟩, tail₁, tail₂) of a state.
fn photon_statistics(trunc: &TruncationSpec, scales: &OscillatorScales, v: &[f64]) -> (f64, f64, f64, f64) {
    let mut p1 = vec![0.0; trunc.n1_max + 1];
    let mut p2 = vec![0.0; trunc.n2_max + 1];
    for (s, x) in trunc.states().zip(v) {
        let w = x * x;
        p1[s.n1] += w;
        p2[s.n2] += w;
    }
    let tail = |p: &[f64], n_max: usize| p[n_max + 1 - tail_window(n_max)..].iter().sum::<f64>();
    let mean = |p: &[f64], mode: u8| {
        if scales.of_mode(mode) == 1.0 {
            p.iter().enumerate().map(|(n, w)| n as f64 * w).sum::<f64>()
        } else {
            build_number_operator_scaled(trunc, mode, scales)
                .and_then(|op| op.expectation(v))
                .expect("operator matches the state")
        }
    };
    (mean(&p1, 1), mean(&p2, 2), tail(&p1, trunc.n1_max), tail(&p2, trunc.n2_max))
}

struct SectorSolution {
    sign: i8,
    energy: f64,
    /// Embedded in the full basis.
    vector: Vec<f64>,
    residual: f64,
    matvecs: usize,
    converged: bool,
}

fn seeded_start(seed: u64, sign: i8, len: usize) -> Vec<f64> {
    let tag = if sign > 0 { 0x9e37_79b9_7f4a_7c15 } else { 0xc2b2_ae3d_27d4_eb4f };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ tag);
    (0..len).map(|_| rng.random_range(-1.0..1.0)).collect()
}

fn solve_sector(
    h: &SparseOperator,
    trunc: &TruncationSpec,
    sign: i8,
    warm: Option<&[f64]>,
    config: &SolverConfig,
) -> Option<SectorSolution> {
    let idx = parity_sector(trunc, sign);
    if idx.is_empty() {
        return None;
    }
    let block = h.restrict(&idx);
    let mut start: Vec<f64> = match warm {
        Some(w) => idx.iter().map(|&i| w[i]).collect(),
        None => Vec::new(),
    };
    if start.iter().all(|x| *x == 0.0) {
        start = seeded_start(config.seed, sign, idx.len());
    }
    let pair = lowest_eigenpair(|x, y| block.apply_into(x, y), &start, &config.lanczos());
    let mut vector = vec![0.0; trunc.dimension()];
    for (k, &i) in idx.iter().enumerate() {
        vector[i] = pair.vector[k];
    }
    Some(SectorSolution {
        sign,
        energy: pair.value,
        vector,
        residual: pair.residual,
        matvecs: pair.matvecs,
        converged: pair.converged,
    })
}

/// Sector-resolved ground states at one truncation.
struct StepSolution {
    best: SectorSolution,
    sectors: Vec<SectorSolution>,
}

fn solve_step(
    params: &ModelParams,
    trunc: &TruncationSpec,
    scales: &OscillatorScales,
    warm: &[Option<Vec<f64>>; 2],
    config: &SolverConfig,
) -> Result<StepSolution> {
    let h = build_hamiltonian_scaled(params, trunc, scales, config.max_dimension)?;
    let mut sectors: Vec<SectorSolution> = [1i8, -1]
        .iter()
        .zip(warm)
        .filter_map(|(&sign, w)| solve_sector(&h, trunc, sign, w.as_deref(), config))
        .collect();
    // Π = +1 wins unless Π = −1 is lower by more than the tolerance; the
    // superradiant doublet can be split by less than machine precision.
    let mut best_k = 0;
    for (k, s) in sectors.iter().enumerate().skip(1) {
        let tie = config.tol_energy * s.energy.abs().max(1.0);
        if s.energy < sectors[best_k].energy - tie {
            best_k = k;
        }
    }
    let best = sectors.remove(best_k);
    Ok(StepSolution { best, sectors })
}

fn finish(
    step: StepSolution,
    trunc: TruncationSpec,
    scales: OscillatorScales,
    iterations: usize,
    trunc_steps: usize,
) -> GroundStateResult {
    // the sector comparison is only meaningful when every sector converged
    let converged = step.best.converged && step.sectors.iter().all(|s| s.converged);
    let SectorSolution {
        sign,
        energy,
        mut vector,
        residual,
        ..
    } = step.best;
    let (imax, _) = vector
        .iter()
        .enumerate()
        .fold((0, 0.0f64), |acc, (i, x)| if x.abs() > acc.1 { (i, x.abs()) } else { acc });
    if vector[imax] < 0.0 {
        vector.iter_mut().for_each(|x| *x = -*x);
    }
    let (n1, n2, tail1, tail2) = photon_statistics(&trunc, &scales, &vector);
    GroundStateResult {
        energy,
        vector,
        n1,
        n2,
        parity: sign as f64,
        trunc_used: trunc,
        scales,
        iterations,
        trunc_steps,
        residual,
        tail1,
        tail2,
        converged,
    }
}

fn step_matvecs(step: &StepSolution) -> usize {
    step.best.matvecs + step.sectors.iter().map(|s| s.matvecs).sum::<usize>()
}

/// Ground state at a fixed truncation, without adaptive growth. With
/// [`BasisScale::Auto`] the widths are matched at this truncation first.
pub fn solve_at_truncation(
    params: &ModelParams,
    trunc: &TruncationSpec,
    config: &SolverConfig,
) -> Result<GroundStateResult> {
    params.validate()?;
    config.validate()?;
    let (scales, mut iterations) = resolve_scales(params, trunc, config)?;
    let step = solve_step(params, trunc, &scales, &[None, None], config)?;
    iterations += step_matvecs(&step);
    Ok(finish(step, *trunc, scales, iterations, 1))
}

/// Widths for the configured [`BasisScale`], and the sparse products spent
/// finding them.
fn resolve_scales(
    params: &ModelParams,
    trunc: &TruncationSpec,
    config: &SolverConfig,
) -> Result<(OscillatorScales, usize)> {
    match config.basis_scale {
        BasisScale::Fock => Ok((OscillatorScales::FOCK, 0)),
        BasisScale::Fixed(s) => Ok((s, 0)),
        BasisScale::Auto => {
            let mut scales = OscillatorScales::FOCK;
            let mut matvecs = 0;
            for _ in 0..MAX_SCALE_PASSES {
                let step = solve_step(params, trunc, &scales, &[None, None], config)?;
                matvecs += step_matvecs(&step);
                let v = &step.best.vector;
                let mut next = [scales.s1, scales.s2];
                for (k, slot) in next.iter_mut().enumerate() {
                    let (x2, p2) = build_quadrature_squares(trunc, k as u8 + 1, &scales)?;
                    let ratio = x2.expectation(v)? / p2.expectation(v)?;
                    if ratio.is_finite() && ratio > 0.0 {
                        *slot = ratio.powf(0.25);
                    }
                }
                let moved = (next[0] / scales.s1 - 1.0).abs().max((next[1] / scales.s2 - 1.0).abs());
                scales = OscillatorScales::new(next[0], next[1])?;
                if moved < SCALE_TOL {
                    break;
                }
            }
            Ok((scales, matvecs))
        }
    }
}

fn grow(n: usize, factor: f64) -> usize {
    ((n as f64 * factor).ceil() as usize).max(n + 2)
}

/// Ground state of H′ with adaptive truncation.
///
/// Starting from `initial_trunc`, each step diagonalizes both parity sectors
/// (warm-started from the previous step) and keeps the lower one. A mode's
/// cutoff grows by `trunc_growth` while its top levels hold more than
/// `tail_tol` probability; when both tails are small the step is compared
/// with the previous one and accepted once E₀, ⟨n₁⟩ and ⟨n₂⟩ changed by
/// less than `trunc_tol` (relative, floored at 1). If Lanczos fails in
/// either sector, the current step is returned with
/// [`GroundStateResult::converged`] cleared; running into `max_dimension`
/// is an error.
pub fn solve_ground_state(params: &ModelParams, config: &SolverConfig) -> Result<GroundStateResult> {
    params.validate()?;
    config.validate()?;
    let mut trunc = config.initial_trunc;
    let (scales, mut iterations) = resolve_scales(params, &trunc, config)?;
    let mut warm: [Option<Vec<f64>>; 2] = [None, None];
    let mut prev: Option<(f64, f64, f64)> = None;

    for steps in 1..=config.max_trunc_steps {
        let step = solve_step(params, &trunc, &scales, &warm, config)?;
        iterations += step_matvecs(&step);
        if !(step.best.converged && step.sectors.iter().all(|s| s.converged)) {
            return Ok(finish(step, trunc, scales, iterations, steps));
        }
        let (n1, n2, tail1, tail2) = photon_statistics(&trunc, &scales, &step.best.vector);
        let e = step.best.energy;
        let tails_ok = [tail1 < config.tail_tol, tail2 < config.tail_tol];
        let settled = prev.is_some_and(|(pe, pn1, pn2)| {
            let close = |a: f64, b: f64| (a - b).abs() <= config.trunc_tol * a.abs().max(1.0);
            close(e, pe) && close(n1, pn1) && close(n2, pn2)
        });
        if tails_ok[0] && tails_ok[1] && settled {
            return Ok(finish(step, trunc, scales, iterations, steps));
        }

        let next = if tails_ok[0] && tails_ok[1] {
            TruncationSpec::new(grow(trunc.n1_max, config.trunc_growth), grow(trunc.n2_max, config.trunc_growth))
        } else {
            TruncationSpec::new(
                if tails_ok[0] { trunc.n1_max } else { grow(trunc.n1_max, config.trunc_growth) },
                if tails_ok[1] { trunc.n2_max } else { grow(trunc.n2_max, config.trunc_growth) },
            )
        };
        next.checked_against(config.max_dimension)?;

        let mut new_warm: [Option<Vec<f64>>; 2] = [None, None];
        for s in std::iter::once(&step.best).chain(&step.sectors) {
            let k = if s.sign > 0 { 0 } else { 1 };
            new_warm[k] = Some(next.embed(&trunc, &s.vector));
        }
        warm = new_warm;
        prev = Some((e, n1, n2));
        trunc = next;
    }
    Err(Error::NoConvergence(format!(
        "truncation not settled after {} steps (last {:?})",
        config.max_trunc_steps, trunc
    )))
}
