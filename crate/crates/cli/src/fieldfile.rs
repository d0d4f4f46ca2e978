//! Binary field interchange format.
//!
//! Layout: magic bytes `KPNW`, format version `u16`, `nx: u32`, `ny: u32`,
//! `Lx: f64`, `Ly: f64`, then `nx * ny` `f64` samples row-major x-fastest.
//! All integers and floats little-endian. Round-trips are bit-exact and
//! admissibility is re-verified on read.

use std::io::{Read, Write};
use std::path::Path;

use kpnw_core::{Field, Grid};

use crate::{exit, CliError};

pub const MAGIC: [u8; 4] = *b"KPNW";
pub const VERSION: u16 = 1;

pub fn write_field(path: &Path, field: &Field) -> Result<(), CliError> {
    let grid = field.grid();
    let mut buf = Vec::with_capacity(22 + 8 * grid.nx() * grid.ny());
    buf.extend_from_slice(&MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&(grid.nx() as u32).to_le_bytes());
    buf.extend_from_slice(&(grid.ny() as u32).to_le_bytes());
    buf.extend_from_slice(&grid.lx().to_le_bytes());
    buf.extend_from_slice(&grid.ly().to_le_bytes());
    // Shape (ny, nx) with x contiguous is exactly row-major x-fastest.
    for v in field.values().iter() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    let mut f = std::fs::File::create(path)?;
    f.write_all(&buf)?;
    Ok(())
}

pub fn read_field(path: &Path) -> Result<Field, CliError> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)
        .map_err(|e| CliError::config(format!("cannot open {}: {e}", path.display())))?
        .read_to_end(&mut bytes)?;
    let fail = |msg: &str| CliError {
        code: exit::CONFIG,
        message: format!("{}: {msg}", path.display()),
    };

    if bytes.len() < 30 {
        return Err(fail("truncated field file"));
    }
    if bytes[0..4] != MAGIC {
        return Err(fail("bad magic bytes"));
    }
    let version = u16::from_le_bytes(bytes[4..6].try_into().unwrap());
    if version != VERSION {
        return Err(fail(&format!("unsupported format version {version}")));
    }
    let nx = u32::from_le_bytes(bytes[6..10].try_into().unwrap()) as usize;
    let ny = u32::from_le_bytes(bytes[10..14].try_into().unwrap()) as usize;
    let lx = f64::from_le_bytes(bytes[14..22].try_into().unwrap());
    let ly = f64::from_le_bytes(bytes[22..30].try_into().unwrap());
    let want = 30 + 8 * nx * ny;
    if bytes.len() != want {
        return Err(fail(&format!(
            "payload length {} does not match {nx}x{ny} samples",
            bytes.len() - 30
        )));
    }
    let grid = Grid::new(nx, ny, lx, ly).map_err(|e| fail(&e.to_string()))?;
    let mut values = ndarray_from_bytes(nx, ny, &bytes[30..]);
    let field = Field::from_values(grid, values.take().unwrap())
        .map_err(|e| fail(&e.to_string()))?;
    if !field.is_admissible() {
        return Err(fail(&format!(
            "field is not admissible (max row mean {:.3e})",
            field.max_row_mean()
        )));
    }
    Ok(field)
}

fn ndarray_from_bytes(nx: usize, ny: usize, data: &[u8]) -> Option<ndarray::Array2<f64>> {
    let mut arr = ndarray::Array2::<f64>::zeros((ny, nx));
    for (slot, chunk) in arr.iter_mut().zip(data.chunks_exact(8)) {
        *slot = f64::from_le_bytes(chunk.try_into().unwrap());
    }
    Some(arr)
}

// ndarray is pulled in through kpnw-core's public API.
use kpnw_core::ndarray;
