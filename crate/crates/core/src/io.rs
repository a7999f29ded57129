//! `LPFLD1` field files.
//!
//! Layout: one ASCII header line `LPFLD1 <dim> <components> <points> <period>\n`
//! followed by little-endian `f64` samples, component-contiguous, each
//! component in row-major order.

use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::Grid;

pub const MAGIC: &str = "LPFLD1";

pub fn write_field<W: Write>(mut out: W, field: &Field) -> Result<()> {
    let g = field.grid();
    writeln!(
        out,
        "{MAGIC} {} {} {} {}",
        g.dim(),
        field.components(),
        g.points(),
        g.period()
    )?;
    let mut buf = Vec::with_capacity(field.values().len() * 8);
    for v in field.values() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    out.write_all(&buf)?;
    Ok(())
}

fn header_err(field: &'static str, message: impl Into<String>) -> Error {
    Error::FieldFormat {
        field,
        message: message.into(),
    }
}

fn parse_header_value<T: std::str::FromStr>(
    token: Option<&str>,
    field: &'static str,
) -> Result<T> {
    let token = token.ok_or_else(|| header_err(field, "missing"))?;
    token
        .parse()
        .map_err(|_| header_err(field, format!("cannot parse `{token}`")))
}

pub fn read_field<R: Read>(input: R) -> Result<Field> {
    let mut reader = BufReader::new(input);
    let mut line = Vec::new();
    reader.read_until(b'\n', &mut line)?;
    if line.last() != Some(&b'\n') {
        return Err(header_err("magic", "no header line"));
    }
    let header = std::str::from_utf8(&line[..line.len() - 1])
        .map_err(|_| header_err("magic", "header is not ASCII"))?;
    let mut tokens = header.split_ascii_whitespace();
    match tokens.next() {
        Some(MAGIC) => {}
        Some(other) => return Err(header_err("magic", format!("expected {MAGIC}, found `{other}`"))),
        None => return Err(header_err("magic", "missing")),
    }
    let dim: usize = parse_header_value(tokens.next(), "dim")?;
    let components: usize = parse_header_value(tokens.next(), "components")?;
    let points: usize = parse_header_value(tokens.next(), "points")?;
    let period: f64 = parse_header_value(tokens.next(), "period")?;
    if let Some(extra) = tokens.next() {
        return Err(header_err("period", format!("unexpected trailing token `{extra}`")));
    }
    if components == 0 {
        return Err(header_err("components", "must be at least 1"));
    }
    let grid = Grid::new(dim, points, period).map_err(|e| {
        let which = if dim == 0 || dim > crate::grid::MAX_DIM {
            "dim"
        } else if !(period.is_finite() && period > 0.0) {
            "period"
        } else {
            "points"
        };
        header_err(which, e.to_string())
    })?;

    let expected = grid.len() * components;
    let mut payload = Vec::new();
    reader.read_to_end(&mut payload)?;
    if payload.len() != expected * 8 {
        return Err(header_err(
            "payload",
            format!("expected {} bytes, found {}", expected * 8, payload.len()),
        ));
    }
    let values = payload
        .chunks_exact(8)
        .map(|b| f64::from_le_bytes(b.try_into().expect("chunk of 8")))
        .collect();
    Field::new(grid, components, values)
}

pub fn save(path: impl AsRef<Path>, field: &Field) -> Result<()> {
    let mut file = fs::File::create(path)?;
    write_field(&mut file, field)?;
    file.flush()?;
    Ok(())
}

pub fn load(path: impl AsRef<Path>) -> Result<Field> {
    read_field(fs::File::open(path)?)
}
