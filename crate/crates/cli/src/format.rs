//! Numeric text formatting and output sinks.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::{CliError, Result};

/// Rounds to 12 significant digits and prints the shortest form of the
/// rounded value.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse::<f64>().unwrap_or(x) + 0.0;
    let mag = rounded.abs();
    if mag != 0.0 && !(1e-4..1e16).contains(&mag) {
        format!("{rounded:e}")
    } else {
        rounded.to_string()
    }
}

pub fn sig12_opt(x: Option<f64>) -> String {
    x.map(sig12).unwrap_or_default()
}

/// Writes `text` to `out`, or to stdout when `out` is `None`.
pub fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

pub fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Usage(format!("csv encoding failed: {e}"));
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(&row).map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Usage(format!("csv encoding failed: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn json_text<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("records serialize");
    s.push('\n');
    s
}
