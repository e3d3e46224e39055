//! Pseudo-spectral laboratory for the incompressible Euler equations in a
//! rotating frame on the periodic box.

pub mod besov;
pub mod diagnostics;
pub mod error;
pub mod fit;
pub mod lab;
pub mod random;
pub mod rotation;
pub mod solver;
pub mod spectral;
pub mod verify;

pub use error::{LabError, Result};
pub use spectral::{Grid, SpectralScalarField, SpectralVectorField};

// Solver buffers are large and short-lived; the system allocator returns them
// to the OS on every free.
#[cfg(feature = "mimalloc")]
#[global_allocator]
static ALLOC: mimalloc::MiMalloc = mimalloc::MiMalloc;
