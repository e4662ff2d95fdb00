use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use rabi3::analytic::critical_coupling;
use rabi3::eigensolver::{solve_ground_state, GroundStateResult, SolverConfig};
use rabi3::model::{Branch, ModelParams};
use rabi3::scaling::{
    collapse_nu, collapsed_points, locate_critical, universal_f, FitWindow, SweepDataset, SweepPoint,
};

use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::manifest::RunManifest;
use crate::output::{csv_writer, num, write_json};

pub const KEYS: &[(&str, Option<&str>)] = &[
    ("alpha", Some("0.8")),
    ("beta", Some("1.2")),
    ("delta", Some("0")),
    ("eta", Some("100,200,400,800,1600,3200")),
    ("R", None),
    ("r", Some("-0.02:0.02:0.002")),
    ("basis", Some("auto")),
    ("fit_window", Some("auto")),
    ("nu_min", Some("1")),
    ("nu_max", Some("2.5")),
    ("synthetic", Some("false")),
    ("synthetic_nu", Some("1.5")),
    ("synthetic_kappa_over_nu", Some("0.6666666666666666")),
    ("trunc_1d", Some("100")),
];

/// Header of `scaling_raw.csv`. Solver columns are empty for synthetic data.
pub const RAW_COLUMNS: [&str; 14] = [
    "eta", "R", "r", "n_over_eta", "n1", "n2", "energy", "parity", "n1_max", "n2_max", "s1", "s2", "iterations",
    "converged",
];

/// Header of `scaling_collapsed.csv`: x = η^{1/ν}·r, y = (n/η)·η^{−slope}.
pub const COLLAPSED_COLUMNS: [&str; 4] = ["eta", "R", "x", "y"];

#[derive(Debug, Serialize)]
struct ResidualPoint {
    coupling: f64,
    residual: f64,
}

#[derive(Debug, Serialize)]
struct FitReport {
    source: &'static str,
    branch: String,
    alpha: f64,
    beta: f64,
    rc_theory: f64,
    rc_est: f64,
    slope: f64,
    intercept: f64,
    nu: f64,
    kappa: f64,
    linfit_residual: f64,
    collapse_cost: f64,
    relative_collapse_cost: f64,
    eta_min: f64,
    etas: Vec<f64>,
    couplings: Vec<f64>,
    residual_profile: Vec<ResidualPoint>,
    manifest: RunManifest,
}

pub fn fit_window(s: &Settings) -> CliResult<FitWindow> {
    match s.str("fit_window")? {
        "auto" => Ok(FitWindow::Auto),
        "all" => Ok(FitWindow::All),
        other => other
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite() && *v > 0.0)
            .map(FitWindow::MinEta)
            .ok_or_else(|| CliError::Config(format!("fit_window: expected auto, all or a minimum eta, got `{other}`"))),
    }
}

struct Grid {
    etas: Vec<f64>,
    couplings: Vec<f64>,
    rc: f64,
}

fn grid(s: &Settings, rc: f64) -> CliResult<Grid> {
    let mut etas = s.grid("eta")?;
    etas.sort_by(f64::total_cmp);
    etas.dedup();
    if etas.len() < 4 {
        return Err(CliError::Config(format!("eta: need at least 4 distinct values, got {}", etas.len())));
    }
    let couplings = if s.has("R") {
        s.grid("R")?
    } else {
        s.grid("r")?.into_iter().map(|r| rc * (1.0 + r)).collect()
    };
    Ok(Grid { etas, couplings, rc })
}

fn solve_all(
    alpha: f64,
    beta: f64,
    grid: &Grid,
    config: &SolverConfig,
    workers: usize,
) -> CliResult<Vec<GroundStateResult>> {
    let tasks: Vec<(f64, f64)> = grid
        .etas
        .iter()
        .flat_map(|&eta| grid.couplings.iter().map(move |&r| (eta, r)))
        .collect();
    let params: Vec<ModelParams> = tasks
        .iter()
        .map(|&(eta, r)| ModelParams::degenerate(alpha, beta, r, eta))
        .collect::<Result<_, _>>()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {workers} workers: {e}")))?;
    let results: Vec<Result<GroundStateResult, String>> = pool.install(|| {
        params
            .par_iter()
            .map(|p| solve_ground_state(p, config).map_err(|e| e.to_string()))
            .collect()
    });
    let failures: Vec<String> = tasks
        .iter()
        .zip(&results)
        .filter_map(|(&(eta, r), res)| match res {
            Err(e) => Some(format!("  eta={eta} R={r}: {e}")),
            Ok(g) if !g.converged => Some(format!(
                "  eta={eta} R={r}: Lanczos residual {:.3e} after {} iterations",
                g.residual, g.iterations
            )),
            Ok(_) => None,
        })
        .collect();
    if !failures.is_empty() {
        return Err(CliError::Numerical(format!(
            "{} of {} points did not converge:\n{}",
            failures.len(),
            tasks.len(),
            failures.join("\n")
        )));
    }
    Ok(results.into_iter().map(|r| r.expect("failures handled above")).collect())
}

/// Data from n/η = η^{−κ/ν}·f(η^{1/ν}·r) with the universal f of the quartic
/// model.
fn synthetic(s: &Settings, branch: Branch, params: &ModelParams, grid: &Grid) -> CliResult<Vec<SweepPoint>> {
    let nu = s.f64("synthetic_nu")?;
    let k = s.f64("synthetic_kappa_over_nu")?;
    let cells: Vec<(f64, f64, f64)> = grid
        .etas
        .iter()
        .flat_map(|&eta| {
            grid.couplings
                .iter()
                .map(move |&r| (eta, r, eta.powf(1.0 / nu) * (r - grid.rc) / grid.rc))
        })
        .collect();
    let xs: Vec<f64> = cells.iter().map(|c| c.2).collect();
    let f = universal_f(branch, params, &xs, s.usize("trunc_1d")?)?;
    Ok(cells
        .iter()
        .zip(f)
        .map(|(&(eta, coupling, _), (_, fx))| SweepPoint {
            eta,
            coupling,
            n_over_eta: eta.powf(-k) * fx,
        })
        .collect())
}

/// Writes `scaling_raw.csv`, `scaling_collapsed.csv` and `scaling_fit.json`.
pub fn run(s: &Settings, out: &Path, workers: usize, manifest: &RunManifest) -> CliResult<()> {
    super::require_zero_delta(s)?;
    if s.has("R") && (s.from_flags().contains_key("r") || s.from_file().contains_key("r")) {
        return Err(CliError::Config("give either R or r, not both".to_string()));
    }
    let (alpha, beta) = (s.f64("alpha")?, s.f64("beta")?);
    let branch = super::branch_for(alpha, beta)?;
    let rc = critical_coupling(alpha, beta)?.rc;
    let grid = grid(s, rc)?;
    let window = fit_window(s)?;
    let nu_range = (s.f64("nu_min")?, s.f64("nu_max")?);
    if !(nu_range.0 > 0.0 && nu_range.0 < nu_range.1) {
        return Err(CliError::Config(format!("need 0 < nu_min < nu_max, got {nu_range:?}")));
    }
    let is_synthetic = s.bool("synthetic")?;

    let mut raw = csv_writer(&out.join("scaling_raw.csv"))?;
    raw.write_record(RAW_COLUMNS)?;
    let points: Vec<SweepPoint> = if is_synthetic {
        let params = ModelParams::degenerate(alpha, beta, rc, 1.0)?;
        let pts = synthetic(s, branch, &params, &grid)?;
        for p in &pts {
            let mut row = vec![num(p.eta), num(p.coupling), num((p.coupling - rc) / rc), num(p.n_over_eta)];
            row.resize(RAW_COLUMNS.len(), String::new());
            raw.write_record(&row)?;
        }
        pts
    } else {
        let config = super::solver_config(s, super::basis_scale(s)?)?;
        let results = solve_all(alpha, beta, &grid, &config, workers)?;
        let mut pts = Vec::with_capacity(results.len());
        let cells = grid.etas.iter().flat_map(|&eta| grid.couplings.iter().map(move |&r| (eta, r)));
        for ((eta, coupling), g) in cells.zip(&results) {
            let n = match branch {
                Branch::Mode1 => g.n1,
                Branch::Mode2 => g.n2,
            };
            let p = SweepPoint {
                eta,
                coupling,
                n_over_eta: n / eta,
            };
            raw.write_record([
                num(eta),
                num(coupling),
                num((coupling - rc) / rc),
                num(p.n_over_eta),
                num(g.n1),
                num(g.n2),
                num(g.energy),
                num(g.parity),
                g.trunc_used.n1_max.to_string(),
                g.trunc_used.n2_max.to_string(),
                num(g.scales.s1),
                num(g.scales.s2),
                g.iterations.to_string(),
                g.converged.to_string(),
            ])?;
            pts.push(p);
        }
        pts
    };
    raw.flush()?;

    let data = SweepDataset::new(branch, alpha, beta, &points)?;
    let crit = locate_critical(&data, window)?;
    let col = collapse_nu(&data, crit.rc_est, crit.slope, nu_range)?;

    let mut collapsed = csv_writer(&out.join("scaling_collapsed.csv"))?;
    collapsed.write_record(COLLAPSED_COLUMNS)?;
    for p in collapsed_points(&data, crit.rc_est, crit.slope, col.nu) {
        collapsed.write_record([num(p.eta), num(p.coupling), num(p.x), num(p.y)])?;
    }
    collapsed.flush()?;

    let report = FitReport {
        source: if is_synthetic { "synthetic" } else { "exact_diagonalization" },
        branch: format!("mode{}", branch.mode_number()),
        alpha,
        beta,
        rc_theory: rc,
        rc_est: crit.rc_est,
        slope: crit.slope,
        intercept: crit.intercept,
        nu: col.nu,
        kappa: -crit.slope * col.nu,
        linfit_residual: crit.linfit_residual,
        collapse_cost: col.collapse_cost,
        relative_collapse_cost: col.relative_cost(),
        eta_min: crit.eta_min,
        etas: data.etas().to_vec(),
        couplings: data.couplings().to_vec(),
        residual_profile: crit
            .residual_profile
            .iter()
            .map(|&(coupling, residual)| ResidualPoint { coupling, residual })
            .collect(),
        manifest: manifest.clone(),
    };
    write_json(&out.join("scaling_fit.json"), &report)?;
    Ok(())
}
