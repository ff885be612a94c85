use std::io::{Read, Write};

use super::{DirichletLaplacian, EigenPair};
use crate::error::{Error, Result};
use crate::format::sci17;

/// Magic bytes opening every eigenvector grid file.
pub const GRID_MAGIC: &[u8; 4] = b"NLAB";

/// `index,lambda` CSV, one row per pair.
pub fn write_eigenvalue_csv<W: Write>(pairs: &[EigenPair], mut out: W) -> Result<()> {
    writeln!(out, "index,lambda")?;
    for p in pairs {
        writeln!(out, "{},{}", p.index, sci17(p.lambda))?;
    }
    Ok(())
}

/// Flat binary grid: 16-byte header (`NLAB`, `u32` rows, `u32` cols, 4 zero
/// bytes) followed by `rows * cols` little-endian `f64` in row-major order.
/// Exterior cells are written as 0.
pub fn write_eigenvector_grid<W: Write>(op: &DirichletLaplacian, pair: &EigenPair, mut out: W) -> Result<()> {
    let (rows, cols) = op.grid_shape();
    let full = op.to_grid(&pair.vector);
    let mut buf = Vec::with_capacity(16 + 8 * full.len());
    buf.extend_from_slice(GRID_MAGIC);
    buf.extend_from_slice(&(rows as u32).to_le_bytes());
    buf.extend_from_slice(&(cols as u32).to_le_bytes());
    buf.extend_from_slice(&[0u8; 4]);
    for v in full {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    out.write_all(&buf)?;
    Ok(())
}

/// Inverse of [`write_eigenvector_grid`]: `(rows, cols, values)`.
pub fn read_eigenvector_grid<R: Read>(mut input: R) -> Result<(usize, usize, Vec<f64>)> {
    let mut header = [0u8; 16];
    input.read_exact(&mut header)?;
    if &header[..4] != GRID_MAGIC {
        return Err(Error::Parse("not an NLAB grid file".into()));
    }
    let rows = u32::from_le_bytes(header[4..8].try_into().unwrap()) as usize;
    let cols = u32::from_le_bytes(header[8..12].try_into().unwrap()) as usize;
    let mut body = Vec::new();
    input.read_to_end(&mut body)?;
    if body.len() != rows * cols * 8 {
        return Err(Error::Parse(format!("expected {} bytes of grid data, found {}", rows * cols * 8, body.len())));
    }
    let values = body.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    Ok((rows, cols, values))
}
