//! Tables as CSV with a `#` metadata header, or as JSON.
//!
//! Floats go through `ryu` (via `csv` and `serde_json`), the shortest decimal
//! that parses back to the same `f64`, so files are byte-stable and rows
//! survive a round trip exactly.

use crate::args::Format;
use crate::error::CliError;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};
use std::path::Path;

/// One row of a width, temperature or Y sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub t: f64,
    pub d_over_a: f64,
    pub model: String,
    #[serde(rename = "beta_F")]
    pub beta_f: f64,
    #[serde(rename = "beta_F_t")]
    pub beta_f_t: f64,
    #[serde(rename = "beta_F_m0")]
    pub beta_f_m0: f64,
    /// Empty when `F` vanishes.
    #[serde(rename = "Y")]
    pub y: Option<f64>,
    pub terms_used: u64,
    pub converged: bool,
}

/// Header lines, `key: value`, in the order written.
pub type Meta = Vec<(String, String)>;

pub fn render<R: Serialize>(meta: &Meta, rows: &[R], format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Csv => {
            let mut out = Vec::new();
            for (k, v) in meta {
                writeln!(out, "# {k}: {v}")?;
            }
            let mut w = csv::Writer::from_writer(&mut out);
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
            drop(w);
            Ok(out)
        }
        Format::Json => {
            let meta: serde_json::Map<String, serde_json::Value> = meta
                .iter()
                .map(|(k, v)| (k.clone(), v.clone().into()))
                .collect();
            let mut out =
                serde_json::to_vec_pretty(&serde_json::json!({ "meta": meta, "rows": rows }))?;
            out.push(b'\n');
            Ok(out)
        }
    }
}

pub fn emit(bytes: &[u8], out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, bytes)?,
        None => std::io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

/// Parse rows back from CSV, skipping the metadata header.
pub fn read_csv<R: DeserializeOwned, I: Read>(input: I) -> Result<Vec<R>, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(input);
    Ok(rdr.deserialize().collect::<Result<_, _>>()?)
}

/// The data section of a CSV file: everything after the `#` header.
pub fn data_section(text: &str) -> String {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect()
}
