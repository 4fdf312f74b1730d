//! Plain-text readers and writers.
//!
//! - zeros: one `re im` pair per line,
//! - boundary samples: `k, re, im` per line, with a power-of-two row count,
//! - singular measures: `theta, mass` per line.
//!
//! Blank lines and lines starting with `#` are skipped; fields may be
//! separated by commas and/or whitespace.

use std::io::{BufRead, Write};

use num_complex::Complex64;

use crate::blaschke::Zero;
use crate::disk::{BoundaryFunction, BoundaryGrid};
use crate::error::{Error, Result};
use crate::factorization::SingularMeasure;

fn records<R: BufRead>(reader: R, width: usize) -> Result<Vec<(usize, Vec<f64>)>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = text.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
        if fields.len() != width {
            return Err(Error::Parse { line: i + 1, message: format!("expected {width} fields, found {}", fields.len()) });
        }
        let values = fields
            .iter()
            .map(|f| f.parse::<f64>().map_err(|e| Error::Parse { line: i + 1, message: format!("{f:?}: {e}") }))
            .collect::<Result<Vec<_>>>()?;
        out.push((i + 1, values));
    }
    Ok(out)
}

pub fn read_zeros<R: BufRead>(reader: R) -> Result<Vec<Zero>> {
    records(reader, 2)?
        .into_iter()
        .map(|(line, v)| {
            Zero::new(Complex64::new(v[0], v[1])).map_err(|e| Error::Parse { line, message: e.to_string() })
        })
        .collect()
}

pub fn write_zeros<W: Write>(mut w: W, zeros: &[Zero]) -> Result<()> {
    for z in zeros {
        let p = z.point();
        writeln!(w, "{:e} {:e}", p.re, p.im)?;
    }
    Ok(())
}

/// Row `k` must carry index `k`.
pub fn read_boundary<R: BufRead>(reader: R) -> Result<BoundaryFunction> {
    let rows = records(reader, 3)?;
    let mut values = Vec::with_capacity(rows.len());
    for (k, (line, v)) in rows.iter().enumerate() {
        if v[0] != k as f64 {
            return Err(Error::Parse { line: *line, message: format!("expected node index {k}, found {}", v[0]) });
        }
        values.push(Complex64::new(v[1], v[2]));
    }
    let grid = BoundaryGrid::with_len(values.len())?;
    BoundaryFunction::new(grid, values)
}

pub fn write_boundary<W: Write>(mut w: W, f: &BoundaryFunction) -> Result<()> {
    for (k, v) in f.values().iter().enumerate() {
        writeln!(w, "{k},{:e},{:e}", v.re, v.im)?;
    }
    Ok(())
}

pub fn read_measure<R: BufRead>(reader: R) -> Result<SingularMeasure> {
    let pairs: Vec<(f64, f64)> = records(reader, 2)?.into_iter().map(|(_, v)| (v[0], v[1])).collect();
    SingularMeasure::from_angles(&pairs)
}
