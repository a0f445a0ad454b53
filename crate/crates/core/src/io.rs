//! Matrix files: CSV with `#` comment lines, and the binary `FDC1` layout
//! (magic, little-endian `u64` rows and columns, row-major little-endian `f64`).

use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"FDC1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    Csv,
    Binary,
}

impl MatrixFormat {
    /// `.bin` and `.fdc` select the binary layout; anything else is CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("bin") | Some("fdc") => Self::Binary,
            _ => Self::Csv,
        }
    }
}

/// Writes CSV; each line of `header` becomes a `# ` comment before the data.
pub fn write_csv(w: &mut impl Write, values: &Array2<f64>, header: &str) -> Result<()> {
    for line in header.lines() {
        writeln!(w, "# {line}")?;
    }
    for row in values.rows() {
        let line: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn read_csv(r: impl Read) -> Result<Array2<f64>> {
    let mut data = Vec::new();
    let mut cols = None;
    for (no, line) in BufReader::new(r).lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let row = trimmed
            .split(',')
            .map(|s| {
                s.trim().parse::<f64>().map_err(|_| {
                    Error::Format(format!("line {}: cannot parse '{}'", no + 1, s.trim()))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        match cols {
            None => cols = Some(row.len()),
            Some(c) if c != row.len() => {
                return Err(Error::Format(format!(
                    "line {}: expected {c} values, found {}",
                    no + 1,
                    row.len()
                )))
            }
            _ => {}
        }
        data.extend(row);
    }
    let cols = cols.ok_or_else(|| Error::Format("no data rows".into()))?;
    let rows = data.len() / cols;
    Array2::from_shape_vec((rows, cols), data).map_err(|e| Error::Format(e.to_string()))
}

pub fn write_binary(w: &mut impl Write, values: &Array2<f64>) -> Result<()> {
    let (rows, cols) = values.dim();
    w.write_all(MAGIC)?;
    w.write_all(&(rows as u64).to_le_bytes())?;
    w.write_all(&(cols as u64).to_le_bytes())?;
    for v in values.iter() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_binary(mut r: impl Read) -> Result<Array2<f64>> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)
        .map_err(|_| Error::Format("file too short for header".into()))?;
    if &magic != MAGIC {
        return Err(Error::Format("missing FDC1 magic".into()));
    }
    let mut word = [0u8; 8];
    let mut dims = [0usize; 2];
    for d in &mut dims {
        r.read_exact(&mut word)
            .map_err(|_| Error::Format("file too short for header".into()))?;
        *d = usize::try_from(u64::from_le_bytes(word))
            .map_err(|_| Error::Format("dimension overflow".into()))?;
    }
    let [rows, cols] = dims;
    let count = rows
        .checked_mul(cols)
        .ok_or_else(|| Error::Format("dimension overflow".into()))?;
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() != count * 8 {
        return Err(Error::Format(format!(
            "expected {} payload bytes for {rows}x{cols}, found {}",
            count * 8,
            bytes.len()
        )));
    }
    let data = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect();
    Array2::from_shape_vec((rows, cols), data).map_err(|e| Error::Format(e.to_string()))
}

/// Reads a matrix, choosing the format from the extension.
pub fn read_matrix(path: &Path) -> Result<Array2<f64>> {
    let file = fs::File::open(path)?;
    match MatrixFormat::from_path(path) {
        MatrixFormat::Csv => read_csv(file),
        MatrixFormat::Binary => read_binary(file),
    }
}

/// Writes a matrix. CSV carries `header` as comments; the binary format gets a
/// `<path>.json` sidecar holding `sidecar`.
pub fn write_matrix(
    path: &Path,
    values: &Array2<f64>,
    header: &str,
    sidecar: &serde_json::Value,
) -> Result<()> {
    let mut file = std::io::BufWriter::new(fs::File::create(path)?);
    match MatrixFormat::from_path(path) {
        MatrixFormat::Csv => write_csv(&mut file, values, header)?,
        MatrixFormat::Binary => {
            write_binary(&mut file, values)?;
            let mut side = path.as_os_str().to_owned();
            side.push(".json");
            fs::write(
                side,
                serde_json::to_string_pretty(sidecar).map_err(|e| Error::Format(e.to_string()))?,
            )?;
        }
    }
    file.flush()?;
    Ok(())
}
