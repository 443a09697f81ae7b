//! Kernel file format: a JSON header `{order, cells, horizon, dtype}` with the
//! row-major values either inline (small kernels) or in a binary sidecar of
//! little-endian f64 (re, im) pairs.

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::kernel::Kernel;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

/// Inline threshold: kernels with more entries go to a `.bin` sidecar.
pub const INLINE_LIMIT: usize = 4096;

const DTYPE: &str = "complex128";

#[derive(Serialize, Deserialize)]
struct Header {
    order: usize,
    cells: usize,
    horizon: f64,
    dtype: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    values: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sidecar: Option<String>,
}

pub fn save_kernel(path: &Path, kernel: &Kernel) -> Result<()> {
    let mut header = Header {
        order: kernel.order(),
        cells: kernel.grid().cells(),
        horizon: kernel.grid().horizon(),
        dtype: DTYPE.to_string(),
        values: None,
        sidecar: None,
    };
    if kernel.values().len() <= INLINE_LIMIT {
        header.values = Some(kernel.values().iter().map(|z| [z.re, z.im]).collect());
    } else {
        let sidecar_name = format!(
            "{}.bin",
            path.file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "kernel".into())
        );
        let mut bytes = Vec::with_capacity(kernel.values().len() * 16);
        for z in kernel.values() {
            bytes.extend_from_slice(&z.re.to_le_bytes());
            bytes.extend_from_slice(&z.im.to_le_bytes());
        }
        fs::write(path.with_file_name(&sidecar_name), bytes)?;
        header.sidecar = Some(sidecar_name);
    }
    fs::write(path, serde_json::to_string(&header)?)?;
    Ok(())
}

pub fn load_kernel(path: &Path) -> Result<Kernel> {
    let header: Header = serde_json::from_str(&fs::read_to_string(path)?)?;
    if header.dtype != DTYPE {
        return Err(Error::Validation(format!(
            "unsupported dtype `{}`",
            header.dtype
        )));
    }
    let grid = GridSpec::new(header.cells, header.horizon)?;
    let values: Vec<Complex64> = match (header.values, header.sidecar) {
        (Some(inline), None) => inline
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect(),
        (None, Some(sidecar)) => {
            let bytes = fs::read(path.with_file_name(&sidecar))?;
            if bytes.len() % 16 != 0 {
                return Err(Error::Validation(format!(
                    "sidecar `{sidecar}` length {} is not a multiple of 16",
                    bytes.len()
                )));
            }
            bytes
                .chunks_exact(16)
                .map(|c| {
                    Complex64::new(
                        f64::from_le_bytes(c[..8].try_into().unwrap()),
                        f64::from_le_bytes(c[8..].try_into().unwrap()),
                    )
                })
                .collect()
        }
        _ => {
            return Err(Error::Validation(
                "kernel file needs exactly one of inline values or a sidecar".into(),
            ))
        }
    };
    Kernel::new(header.order, grid, values)
}
