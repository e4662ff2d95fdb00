use std::path::Path;

use rabi3::analytic::classify_phase;
use rabi3::model::ModelParams;

use crate::config::Settings;
use crate::error::CliResult;
use crate::output::{csv_writer, num};

pub const KEYS: &[(&str, Option<&str>)] = &[("gamma", Some("0.5:2:0.05")), ("R", Some("0:2:0.05")), ("beta", Some("1.2")), ("delta", Some("0"))];

/// Columns: `gamma,R,label,y1,y2,E0`, one row per grid point with α = γβ².
pub fn run(s: &Settings, out: &Path) -> CliResult<()> {
    super::require_zero_delta(s)?;
    let gammas = s.grid("gamma")?;
    let couplings = s.grid("R")?;
    let beta = s.f64("beta")?;
    let mut w = csv_writer(&out.join("phase_diagram.csv"))?;
    w.write_record(["gamma", "R", "label", "y1", "y2", "E0"])?;
    for &gamma in &gammas {
        for &r in &couplings {
            let params = ModelParams::degenerate(gamma * beta * beta, beta, r, 1.0)?;
            let c = classify_phase(&params)?;
            w.write_record([num(gamma), num(r), c.label.as_str().to_string(), num(c.y1), num(c.y2), num(c.energy)])?;
        }
    }
    w.flush()?;
    Ok(())
}
