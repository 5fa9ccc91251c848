use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Serialize)]
struct Document<'a, M: Serialize, R: Serialize> {
    meta: &'a M,
    rows: &'a [R],
}

/// CSV: header plus one record per row, RFC 4180 quoting, shortest
/// round-trip float formatting. JSON: `{"meta": ..., "rows": [...]}`.
pub fn render<M: Serialize, R: Serialize>(format: Format, meta: &M, rows: &[R]) -> Result<Vec<u8>, String> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in rows {
                w.serialize(row).map_err(|e| e.to_string())?;
            }
            w.into_inner().map_err(|e| e.to_string())
        }
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(&Document { meta, rows }).map_err(|e| e.to_string())?;
            out.push(b'\n');
            Ok(out)
        }
    }
}

pub fn write_bytes(path: Option<&Path>, bytes: &[u8]) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()
        }
    }
}
