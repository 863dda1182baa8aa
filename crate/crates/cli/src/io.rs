//! CSV and JSON file handling.

use std::fmt::Display;
use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::error::{CliError, CliResult};

/// Reads a single-column CSV whose header is one of `headers`.
fn read_column(path: &Path, headers: &[&str]) -> CliResult<Vec<String>> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let header = reader
        .headers()
        .map_err(|e| CliError::input(path, e.to_string()))?
        .clone();
    if header.len() != 1 || !headers.contains(&&header[0]) {
        return Err(CliError::input(
            path,
            format!("expected a single column headed {}", headers.join(" or ")),
        ));
    }
    let mut values = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::input(path, e.to_string()))?;
        if record.len() != 1 {
            return Err(CliError::input(path, "expected exactly one field per row"));
        }
        values.push(record[0].to_string());
    }
    if values.is_empty() {
        return Err(CliError::input(path, "no data rows"));
    }
    Ok(values)
}

fn parse_all<T: std::str::FromStr>(path: &Path, raw: Vec<String>, what: &str) -> CliResult<Vec<T>> {
    raw.iter()
        .enumerate()
        .map(|(row, v)| {
            v.parse()
                .map_err(|_| CliError::input(path, format!("row {}: {v:?} is not {what}", row + 1)))
        })
        .collect()
}

/// Integer symbols from a column headed `s`.
pub fn read_symbols(path: &Path) -> CliResult<Vec<usize>> {
    let raw = read_column(path, &["s"])?;
    parse_all(path, raw, "a non-negative integer")
}

/// Spike times in seconds from a column headed `t`.
pub fn read_times(path: &Path) -> CliResult<Vec<f64>> {
    let raw = read_column(path, &["t"])?;
    parse_all(path, raw, "a number")
}

/// Numeric samples from a column headed `s`, `x` or `t`.
pub fn read_samples(path: &Path) -> CliResult<Vec<f64>> {
    let raw = read_column(path, &["s", "x", "t"])?;
    parse_all(path, raw, "a number")
}

pub fn read_channel(path: &Path) -> CliResult<Vec<Vec<f64>>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(path, e.to_string()))
}

pub fn write_column<T: Display>(path: &Path, header: &str, values: &[T]) -> CliResult<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| csv_io(path, e))?;
    writer.write_record([header]).map_err(|e| csv_io(path, e))?;
    for v in values {
        writer.write_record([v.to_string()]).map_err(|e| csv_io(path, e))?;
    }
    writer.flush().map_err(|e| CliError::io(path, e))
}

fn csv_io(path: &Path, e: csv::Error) -> CliError {
    CliError::io(path, std::io::Error::other(e))
}

/// Writes `text` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}
