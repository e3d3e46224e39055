//! Binary snapshot files.
//!
//! Layout (little-endian): magic `REULAB01`, `u32 n`, `f64 L`, `f64 time`,
//! `u8 component count`, then for each component the `n^3` coefficients in
//! row-major `(i, j, k)` order, each as `f64 re, f64 im`.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{LabError, Result};
use crate::spectral::field::{SpectralScalarField, SpectralVectorField};
use crate::spectral::grid::Grid;

pub const MAGIC: &[u8; 8] = b"REULAB01";

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub components: Vec<SpectralScalarField>,
}

impl Snapshot {
    pub fn from_vector(time: f64, v: &SpectralVectorField) -> Self {
        Self {
            time,
            components: v.components().to_vec(),
        }
    }

    pub fn into_vector(self) -> Result<SpectralVectorField> {
        let [a, b, c]: [SpectralScalarField; 3] = self.components.try_into().map_err(
            |v: Vec<SpectralScalarField>| {
                LabError::Snapshot(format!("expected 3 components, found {}", v.len()))
            },
        )?;
        SpectralVectorField::new([a, b, c])
    }

    pub fn encode(&self) -> Result<Vec<u8>> {
        let first = self
            .components
            .first()
            .ok_or_else(|| LabError::Snapshot("snapshot has no components".into()))?;
        let grid = first.grid();
        let count = u8::try_from(self.components.len())
            .map_err(|_| LabError::Snapshot("too many components".into()))?;
        let mut out = Vec::with_capacity(29 + self.components.len() * grid.len() * 16);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&(grid.n() as u32).to_le_bytes());
        out.extend_from_slice(&grid.box_size().to_le_bytes());
        out.extend_from_slice(&self.time.to_le_bytes());
        out.push(count);
        for comp in &self.components {
            if comp.grid() != grid {
                return Err(LabError::GridMismatch);
            }
            for c in comp.coeffs() {
                out.extend_from_slice(&c.re.to_le_bytes());
                out.extend_from_slice(&c.im.to_le_bytes());
            }
        }
        Ok(out)
    }

    pub fn decode(mut bytes: &[u8]) -> Result<Self> {
        let mut magic = [0u8; 8];
        read_exact(&mut bytes, &mut magic)?;
        if &magic != MAGIC {
            return Err(LabError::Snapshot("bad magic".into()));
        }
        let n = u32::from_le_bytes(take(&mut bytes)?) as usize;
        let box_size = f64::from_le_bytes(take(&mut bytes)?);
        let time = f64::from_le_bytes(take(&mut bytes)?);
        let [count] = take::<1>(&mut bytes)?;
        let grid = Grid::new(n, box_size)?;
        let expected = count as usize * grid.len() * 16;
        if bytes.len() != expected {
            return Err(LabError::Snapshot(format!(
                "body has {} bytes, expected {expected}",
                bytes.len()
            )));
        }
        let mut components = Vec::with_capacity(count as usize);
        for _ in 0..count {
            let mut coeffs = Vec::with_capacity(grid.len());
            for _ in 0..grid.len() {
                let re = f64::from_le_bytes(take(&mut bytes)?);
                let im = f64::from_le_bytes(take(&mut bytes)?);
                coeffs.push(Complex64::new(re, im));
            }
            components.push(SpectralScalarField::from_coeffs(&grid, coeffs)?);
        }
        Ok(Self { time, components })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let bytes = self.encode()?;
        let mut file = fs::File::create(path).map_err(|e| LabError::io(path, e))?;
        file.write_all(&bytes).map_err(|e| LabError::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let mut bytes = Vec::new();
        fs::File::open(path)
            .and_then(|mut f| f.read_to_end(&mut bytes))
            .map_err(|e| LabError::io(path, e))?;
        Self::decode(&bytes)
    }
}

fn read_exact(bytes: &mut &[u8], buf: &mut [u8]) -> Result<()> {
    bytes
        .read_exact(buf)
        .map_err(|_| LabError::Snapshot("truncated snapshot".into()))
}

fn take<const N: usize>(bytes: &mut &[u8]) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    read_exact(bytes, &mut buf)?;
    Ok(buf)
}
