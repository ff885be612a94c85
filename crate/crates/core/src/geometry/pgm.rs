use std::io::Write;

use super::Mask;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmFormat {
    /// Plain text (`P2`).
    Ascii,
    /// Raw bytes (`P5`).
    Binary,
}

/// Dump a mask as a portable graymap: interior cells white (255), exterior black.
/// Row 0 of the mask is written last so that `y` points up in image viewers.
pub fn write_pgm<W: Write>(mask: &Mask, format: PgmFormat, mut out: W) -> Result<()> {
    let (rows, cols) = (mask.rows(), mask.cols());
    let value = |r: usize, c: usize| if mask.get(r, c) { 255u8 } else { 0u8 };
    match format {
        PgmFormat::Ascii => {
            writeln!(out, "P2\n{cols} {rows}\n255")?;
            for r in (0..rows).rev() {
                let line: Vec<String> = (0..cols).map(|c| value(r, c).to_string()).collect();
                writeln!(out, "{}", line.join(" "))?;
            }
        }
        PgmFormat::Binary => {
            write!(out, "P5\n{cols} {rows}\n255\n")?;
            for r in (0..rows).rev() {
                let row: Vec<u8> = (0..cols).map(|c| value(r, c)).collect();
                out.write_all(&row)?;
            }
        }
    }
    Ok(())
}
