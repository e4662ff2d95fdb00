use std::fs::File;
use std::path::Path;

use serde::Serialize;

use crate::error::CliResult;

/// CSV writer with `,` separators and LF line endings.
pub fn csv_writer(path: &Path) -> CliResult<csv::Writer<File>> {
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)?)
}

/// Shortest representation that round-trips; scientific notation for very
/// small or large magnitudes.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
