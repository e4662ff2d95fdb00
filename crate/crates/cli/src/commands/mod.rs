//! One module per subcommand. Each exposes the accepted setting keys with
//! their defaults and a `run` function writing into an output directory.

pub mod mean_photon;
pub mod phase_diagram;
pub mod scaling;
pub mod solve;
pub mod universal_f;

use rabi3::analytic::{critical_coupling, Regime};
use rabi3::eigensolver::{BasisScale, SolverConfig};
use rabi3::model::{Branch, TruncationSpec};

use crate::config::Settings;
use crate::error::{CliError, CliResult};

/// Solver keys shared by `solve` and `scaling`.
pub const SOLVER_KEYS: &[(&str, Option<&str>)] = &[
    ("tol_energy", Some("1e-10")),
    ("trunc_tol", Some("1e-6")),
    ("tail_tol", Some("1e-10")),
    ("max_krylov", Some("64")),
    ("max_restarts", Some("200")),
    ("n1_max", Some("8")),
    ("n2_max", Some("8")),
    ("max_dimension", Some("4000000")),
];

pub fn solver_config(s: &Settings, basis: BasisScale) -> CliResult<SolverConfig> {
    let config = SolverConfig {
        tol_energy: s.f64("tol_energy")?,
        trunc_tol: s.f64("trunc_tol")?,
        tail_tol: s.f64("tail_tol")?,
        max_krylov: s.usize("max_krylov")?,
        max_restarts: s.usize("max_restarts")?,
        initial_trunc: TruncationSpec::new(s.usize("n1_max")?, s.usize("n2_max")?),
        max_dimension: s.usize("max_dimension")?,
        seed: s.u64("seed")?,
        basis_scale: basis,
        ..SolverConfig::default()
    };
    config.validate()?;
    Ok(config)
}

pub fn basis_scale(s: &Settings) -> CliResult<BasisScale> {
    match s.str("basis")? {
        "fock" => Ok(BasisScale::Fock),
        "auto" => Ok(BasisScale::Auto),
        other => Err(CliError::Config(format!("basis: expected `fock` or `auto`, got `{other}`"))),
    }
}

/// The mode that condenses for the given α, β.
pub fn branch_for(alpha: f64, beta: f64) -> CliResult<Branch> {
    match critical_coupling(alpha, beta)?.regime {
        Regime::AlphaLessBetaSq => Ok(Branch::Mode2),
        Regime::AlphaGreaterBetaSq => Ok(Branch::Mode1),
        Regime::AlphaEqualsBetaSq => Err(CliError::Config(
            "alpha = beta^2 has no single condensing mode".to_string(),
        )),
    }
}

pub fn require_zero_delta(s: &Settings) -> CliResult<()> {
    let delta = s.f64("delta")?;
    if delta != 0.0 {
        return Err(CliError::Config(format!("delta must be 0 for this command, got {delta}")));
    }
    Ok(())
}
