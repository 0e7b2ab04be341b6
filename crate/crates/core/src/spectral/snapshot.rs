//! Binary field snapshots.
//!
//! Layout (little-endian): `"AQGF"`, version `u32`, `n1 u32`, `n2 u32`,
//! `l1 f64`, `l2 f64` (32 bytes), then `n1·n2` `f64` point values, row-major
//! with `x₂` fastest.

use std::io::{Read, Write};
use std::sync::Arc;

use super::{Grid, PhysicalField, SpectralError};

pub const MAGIC: [u8; 4] = *b"AQGF";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 32;

pub fn write_snapshot<W: Write>(mut w: W, field: &PhysicalField) -> Result<(), SpectralError> {
    let g = field.grid();
    let mut header = Vec::with_capacity(HEADER_LEN);
    header.extend_from_slice(&MAGIC);
    header.extend_from_slice(&VERSION.to_le_bytes());
    header.extend_from_slice(&(g.n1() as u32).to_le_bytes());
    header.extend_from_slice(&(g.n2() as u32).to_le_bytes());
    header.extend_from_slice(&g.l1().to_le_bytes());
    header.extend_from_slice(&g.l2().to_le_bytes());
    w.write_all(&header)?;
    let mut body = Vec::with_capacity(8 * g.len());
    for v in field.values() {
        body.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&body)?;
    Ok(())
}

/// Reads a snapshot, building a fresh grid from its header.
pub fn read_snapshot<R: Read>(r: R) -> Result<PhysicalField, SpectralError> {
    read_snapshot_with(r, None)
}

/// Reads a snapshot onto an existing grid, which must match the header.
pub fn read_snapshot_on<R: Read>(r: R, grid: &Arc<Grid>) -> Result<PhysicalField, SpectralError> {
    read_snapshot_with(r, Some(grid))
}

fn read_snapshot_with<R: Read>(
    mut r: R,
    grid: Option<&Arc<Grid>>,
) -> Result<PhysicalField, SpectralError> {
    let mut header = [0u8; HEADER_LEN];
    r.read_exact(&mut header)?;
    if header[0..4] != MAGIC {
        return Err(SpectralError::Snapshot("bad magic".into()));
    }
    let u32_at = |o: usize| u32::from_le_bytes(header[o..o + 4].try_into().unwrap());
    let f64_at = |o: usize| f64::from_le_bytes(header[o..o + 8].try_into().unwrap());
    let version = u32_at(4);
    if version != VERSION {
        return Err(SpectralError::Snapshot(format!(
            "unsupported version {version}"
        )));
    }
    let (n1, n2) = (u32_at(8) as usize, u32_at(12) as usize);
    let (l1, l2) = (f64_at(16), f64_at(24));
    let grid = match grid {
        Some(g) => {
            if g.n1() != n1 || g.n2() != n2 || g.l1() != l1 || g.l2() != l2 {
                return Err(SpectralError::GridMismatch);
            }
            g.clone()
        }
        None => Grid::new(n1, n2, l1, l2)?,
    };
    let mut body = vec![0u8; 8 * grid.len()];
    r.read_exact(&mut body)?;
    let values = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    PhysicalField::new(grid, values)
}
