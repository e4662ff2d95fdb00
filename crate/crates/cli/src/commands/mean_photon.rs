use std::path::Path;

use rabi3::analytic::mean_photon_analytic;
use rabi3::model::ModelParams;
use rabi3::Error;

use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::output::{csv_writer, num};

pub const KEYS: &[(&str, Option<&str>)] = &[
    ("alpha", None),
    ("gamma", None),
    ("beta", Some("1.2")),
    ("delta", Some("0")),
    ("R", Some("0:2:0.05")),
    ("mode", Some("both")),
];

/// Columns: `gamma,R`, then `n1_over_eta` and/or `n2_over_eta` depending on
/// `mode`, then `flag` (`ok`, or `boundary_u1` with empty values on α = β²).
pub fn run(s: &Settings, out: &Path) -> CliResult<()> {
    super::require_zero_delta(s)?;
    let beta = s.f64("beta")?;
    let gammas = match (s.has("alpha"), s.has("gamma")) {
        (true, false) => vec![s.f64("alpha")? / (beta * beta)],
        (false, true) => s.grid("gamma")?,
        _ => return Err(CliError::Config("give exactly one of alpha or gamma".to_string())),
    };
    let (show1, show2) = match s.str("mode")? {
        "1" => (true, false),
        "2" => (false, true),
        "both" => (true, true),
        other => return Err(CliError::Config(format!("mode: expected 1, 2 or both, got `{other}`"))),
    };
    let couplings = s.grid("R")?;

    let mut w = csv_writer(&out.join("mean_photon.csv"))?;
    let mut header = vec!["gamma", "R"];
    if show1 {
        header.push("n1_over_eta");
    }
    if show2 {
        header.push("n2_over_eta");
    }
    header.push("flag");
    w.write_record(&header)?;

    for &gamma in &gammas {
        let alpha = if s.has("alpha") { s.f64("alpha")? } else { gamma * beta * beta };
        for &r in &couplings {
            let params = ModelParams::degenerate(alpha, beta, r, 1.0)?;
            let (values, flag) = match mean_photon_analytic(&params) {
                Ok(m) => ([num(m.n1_over_eta), num(m.n2_over_eta)], "ok"),
                Err(Error::UnsupportedRegime(_)) => ([String::new(), String::new()], "boundary_u1"),
                Err(e) => return Err(e.into()),
            };
            let mut row = vec![num(gamma), num(r)];
            if show1 {
                row.push(values[0].clone());
            }
            if show2 {
                row.push(values[1].clone());
            }
            row.push(flag.to_string());
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}
