//! Seeded random band-limited fields for ensembles and tests.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::rotation::leray_project;
use crate::spectral::{Grid, SpectralScalarField, SpectralVectorField};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Real Gaussian white noise filtered to integer radius `|k| <= kmax`,
/// with zero mean and empty Nyquist rows.
pub fn random_scalar(grid: &Grid, seed: u64, kmax: f64) -> SpectralScalarField {
    let mut rng = rng(seed);
    random_scalar_from(grid, &mut rng, kmax)
}

pub fn random_scalar_from(grid: &Grid, rng: &mut ChaCha8Rng, kmax: f64) -> SpectralScalarField {
    let noise: Vec<f64> = (0..grid.len()).map(|_| StandardNormal.sample(rng)).collect();
    let mut f = SpectralScalarField::to_spectral(grid, &noise).expect("noise matches grid");
    for (idx, c) in f.coeffs_mut().iter_mut().enumerate() {
        let k = grid.mode(idx);
        let r2 = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64;
        if r2 > kmax * kmax {
            *c = Complex64::default();
        }
    }
    f.zero_mean();
    f.zero_nyquist();
    f
}

pub fn random_vector(grid: &Grid, seed: u64, kmax: f64) -> SpectralVectorField {
    let mut rng = rng(seed);
    random_vector_from(grid, &mut rng, kmax)
}

pub fn random_vector_from(grid: &Grid, rng: &mut ChaCha8Rng, kmax: f64) -> SpectralVectorField {
    SpectralVectorField::new([
        random_scalar_from(grid, rng, kmax),
        random_scalar_from(grid, rng, kmax),
        random_scalar_from(grid, rng, kmax),
    ])
    .expect("components share the grid")
}

/// Divergence-free random field, band-limited to `|k| <= kmax`.
pub fn random_solenoidal(grid: &Grid, seed: u64, kmax: f64) -> SpectralVectorField {
    leray_project(&random_vector(grid, seed, kmax))
}

pub fn random_solenoidal_from(grid: &Grid, rng: &mut ChaCha8Rng, kmax: f64) -> SpectralVectorField {
    leray_project(&random_vector_from(grid, rng, kmax))
}
