//! Periodic-box spectral representation: grids, transforms, multipliers,
//! derivatives, dealiasing and L^p norms.

mod fft;
pub mod field;
pub mod grid;
pub mod snapshot;

pub use field::{
    curl, divergence, gradient, laplacian, partial, Exponent, SpectralScalarField,
    SpectralVectorField,
};
pub use grid::Grid;
pub use snapshot::Snapshot;
