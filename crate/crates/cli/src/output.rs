//! Deterministic output: every float is printed with 12 significant digits,
//! JSON documents are rounded before serialisation, and the whole report is
//! assembled in memory before a single write.

use std::io::Write;
use std::path::Path;

use crate::errors::CliError;

/// Round to 12 significant digits, the precision every report prints with.
pub fn sig12(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    let magnitude = v.abs().log10().floor();
    let scale = 10f64.powi(11 - magnitude as i32);
    (v * scale).round() / scale
}

/// Fixed-width scientific notation with 12 significant digits, for CSV.
pub fn fmt_float(v: f64) -> String {
    format!("{:.11e}", v)
}

/// Round every float in a JSON tree to 12 significant digits.
pub fn round_json(value: &mut serde_json::Value) {
    match value {
        serde_json::Value::Number(n) => {
            if n.is_f64() {
                let rounded = sig12(n.as_f64().unwrap());
                if let Some(replacement) = serde_json::Number::from_f64(rounded) {
                    *n = replacement;
                }
            }
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(round_json),
        serde_json::Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

/// Pretty-print a JSON document after rounding, with a trailing newline.
pub fn json_document(mut value: serde_json::Value) -> String {
    round_json(&mut value);
    let mut text = serde_json::to_string_pretty(&value).expect("serialising a finite document");
    text.push('\n');
    text
}

/// Build a CSV document from string records; rows may vary in width.
pub fn csv_document(rows: &[Vec<String>]) -> String {
    let mut writer = csv::WriterBuilder::new()
        .flexible(true)
        .from_writer(Vec::new());
    for row in rows {
        writer.write_record(row).expect("writing csv to memory");
    }
    let bytes = writer.into_inner().expect("flushing csv to memory");
    String::from_utf8(bytes).expect("csv output is utf-8")
}

/// Send the finished document to stdout or to `--out`.
pub fn write_output(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => {
            let stdout = std::io::stdout();
            stdout.lock().write_all(content.as_bytes())?;
        }
    }
    Ok(())
}
