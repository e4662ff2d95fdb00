use std::path::Path;

use serde::Serialize;

use rabi3::eigensolver::solve_ground_state;
use rabi3::model::{ModelParams, OscillatorScales, TruncationSpec};

use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::output::{csv_writer, num, write_json};

pub const KEYS: &[(&str, Option<&str>)] = &[
    ("alpha", Some("0.8")),
    ("beta", Some("1.2")),
    ("delta", Some("0")),
    ("R", Some("1")),
    ("eta", Some("100")),
    ("basis", Some("fock")),
    ("dump_state", Some("false")),
];

#[derive(Serialize)]
struct SolveReport {
    alpha: f64,
    beta: f64,
    delta: f64,
    coupling: f64,
    eta: f64,
    energy: f64,
    n1: f64,
    n2: f64,
    n1_over_eta: f64,
    n2_over_eta: f64,
    parity: f64,
    trunc_used: TruncationSpec,
    oscillator_scales: OscillatorScales,
    dimension: usize,
    iterations: usize,
    trunc_steps: usize,
    residual: f64,
    converged: bool,
}

/// Writes `solve.json` and, with `dump_state`, `state.csv` with columns
/// `index,level,n1,n2,amplitude` (oscillator labels refer to the widths in
/// `oscillator_scales`). A flagged non-converged result is still written
/// before exiting with a numerical error.
pub fn run(s: &Settings, out: &Path) -> CliResult<()> {
    let params = ModelParams::new(s.f64("alpha")?, s.f64("beta")?, s.f64("delta")?, s.f64("R")?, s.f64("eta")?)?;
    let config = super::solver_config(s, super::basis_scale(s)?)?;
    let r = solve_ground_state(&params, &config)?;
    let report = SolveReport {
        alpha: params.alpha,
        beta: params.beta,
        delta: params.delta,
        coupling: params.coupling,
        eta: params.eta,
        energy: r.energy,
        n1: r.n1,
        n2: r.n2,
        n1_over_eta: r.n1 / params.eta,
        n2_over_eta: r.n2 / params.eta,
        parity: r.parity,
        trunc_used: r.trunc_used,
        oscillator_scales: r.scales,
        dimension: r.vector.len(),
        iterations: r.iterations,
        trunc_steps: r.trunc_steps,
        residual: r.residual,
        converged: r.converged,
    };
    write_json(&out.join("solve.json"), &report)?;
    if s.bool("dump_state")? {
        let mut w = csv_writer(&out.join("state.csv"))?;
        w.write_record(["index", "level", "n1", "n2", "amplitude"])?;
        for (i, (state, amp)) in r.trunc_used.states().zip(&r.vector).enumerate() {
            w.write_record([
                i.to_string(),
                state.level.label().to_string(),
                state.n1.to_string(),
                state.n2.to_string(),
                num(*amp),
            ])?;
        }
        w.flush()?;
    }
    if !r.converged {
        return Err(CliError::Numerical(format!(
            "Lanczos did not converge (residual {:.3e} after {} iterations)",
            r.residual, r.iterations
        )));
    }
    Ok(())
}
