use std::path::Path;

use rabi3::analytic::critical_coupling;
use rabi3::model::{Branch, ModelParams};
use rabi3::scaling::universal_f;

use crate::config::Settings;
use crate::error::CliResult;
use crate::output::{csv_writer, num};

pub const KEYS: &[(&str, Option<&str>)] = &[
    ("branch", None),
    ("alpha", Some("0.8")),
    ("beta", Some("1.2")),
    ("rprime", Some("-10:10:0.1")),
    ("trunc_1d", Some("100")),
];

/// Branch from the `branch` key, or from the α, β regime when absent.
pub fn branch(s: &Settings) -> CliResult<Branch> {
    if s.has("branch") {
        Ok(s.str("branch")?.parse()?)
    } else {
        super::branch_for(s.f64("alpha")?, s.f64("beta")?)
    }
}

/// Columns: `rprime,f`.
pub fn run(s: &Settings, out: &Path) -> CliResult<()> {
    let branch = branch(s)?;
    let (alpha, beta) = (s.f64("alpha")?, s.f64("beta")?);
    let rc = critical_coupling(alpha, beta)?.rc;
    let params = ModelParams::degenerate(alpha, beta, rc, 1.0)?;
    let curve = universal_f(branch, &params, &s.grid("rprime")?, s.usize("trunc_1d")?)?;
    let mut w = csv_writer(&out.join("universal_f.csv"))?;
    w.write_record(["rprime", "f"])?;
    for (rp, f) in curve {
        w.write_record([num(rp), num(f)])?;
    }
    w.flush()?;
    Ok(())
}
