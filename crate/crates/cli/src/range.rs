use crate::error::{CliError, CliResult};

/// Grid values are rounded to this many decimals to strip accumulation noise
/// from `start + k·step`.
const GRID_DECIMALS: i32 = 12;

fn number(key: &str, s: &str) -> CliResult<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("{key}: `{s}` is not a number")))?;
    if !v.is_finite() {
        return Err(CliError::Config(format!("{key}: `{s}` is not finite")));
    }
    Ok(v)
}

/// Parses a grid specification:
///
/// * `start:stop:step`, inclusive of `stop` when it lies on the grid;
/// * a comma-separated list `a,b,c`;
/// * a single number.
pub fn parse_grid(key: &str, spec: &str) -> CliResult<Vec<f64>> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err(CliError::Config(format!("{key}: empty value")));
    }
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::Config(format!("{key}: expected start:stop:step, got `{spec}`")));
        }
        let (start, stop, step) = (number(key, parts[0])?, number(key, parts[1])?, number(key, parts[2])?);
        if step <= 0.0 {
            return Err(CliError::Config(format!("{key}: step must be positive, got {step}")));
        }
        if stop < start {
            return Err(CliError::Config(format!("{key}: stop {stop} is below start {start}")));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        if count > 10_000_000 {
            return Err(CliError::Config(format!("{key}: {count} grid points is too many")));
        }
        let scale = 10f64.powi(GRID_DECIMALS);
        return Ok((0..count)
            .map(|k| ((start + k as f64 * step) * scale).round() / scale)
            .collect());
    }
    spec.split(',').map(|s| number(key, s)).collect()
}
