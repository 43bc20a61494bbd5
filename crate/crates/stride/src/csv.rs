//! Trace CSV files.
//!
//! ```text
//! #subject=a
//! #distance_m=10
//! t,x,y,z
//! 0.000000,0.0000,0.0000,9.8100
//! 0.020000,0.0000,0.0000,9.8100
//! ```
//!
//! Leading `#key=value` lines become trace metadata. The writer emits 6
//! decimals for `t` and 4 for the axes.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use stride_core::{AccelSample, Trace};

use crate::error::{Error, Result};

pub const HEADER: &str = "t,x,y,z";

pub fn load_trace(path: impl AsRef<Path>) -> Result<Trace> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_trace(BufReader::new(file), path)
}

/// Parses CSV from `reader`; `origin` only labels errors.
pub fn read_trace(reader: impl BufRead, origin: &Path) -> Result<Trace> {
    let parse_error = |line: usize, message: String| Error::Parse { path: origin.to_path_buf(), line, message };
    let mut meta = BTreeMap::new();
    let mut samples = Vec::new();
    let mut seen_header = false;

    for (n, line) in reader.lines().enumerate() {
        let line_no = n + 1;
        let line = line.map_err(|e| Error::io(origin, e))?;
        let line = line.trim();
        if !seen_header {
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some((key, value)) = comment.split_once('=') {
                    meta.insert(key.trim().to_string(), value.trim().to_string());
                }
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.join(",") != HEADER {
                return Err(parse_error(line_no, format!("expected header `{HEADER}`, found `{line}`")));
            }
            seen_header = true;
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(parse_error(line_no, format!("expected 4 fields, found {}", fields.len())));
        }
        let mut row = [0.0; 4];
        for (slot, field) in row.iter_mut().zip(&fields) {
            *slot = field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_error(line_no, format!("`{field}` is not a finite decimal")))?;
        }
        samples.push(AccelSample::new(row[0], row[1], row[2], row[3]));
    }
    if !seen_header {
        return Err(parse_error(0, format!("missing header `{HEADER}`")));
    }
    Trace::new(samples, meta).map_err(|source| Error::Trace { path: origin.to_path_buf(), source })
}

pub fn save_trace(trace: &Trace, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    write_trace(trace, &mut out).and_then(|_| out.flush()).map_err(|e| Error::io(path, e))
}

pub fn write_trace(trace: &Trace, mut out: impl Write) -> std::io::Result<()> {
    for (key, value) in trace.meta() {
        writeln!(out, "#{key}={value}")?;
    }
    writeln!(out, "{HEADER}")?;
    for s in trace.samples() {
        writeln!(out, "{:.6},{:.4},{:.4},{:.4}", s.t, s.x, s.y, s.z)?;
    }
    Ok(())
}
