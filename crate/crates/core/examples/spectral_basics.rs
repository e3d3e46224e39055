//! Grids, transforms, derivatives, projection and snapshot files.
//!
//! cargo run --example spectral_basics

use reulab::rotation::leray_project;
use reulab::spectral::{curl, divergence, partial, Exponent, Snapshot};
use reulab::{Grid, SpectralScalarField, SpectralVectorField};

fn main() -> reulab::Result<()> {
    let grid = Grid::periodic(32)?;
    println!("grid: n = {}, L = {:.4}, dx = {:.4}", grid.n(), grid.box_size(), grid.spacing());

    let f = SpectralScalarField::from_fn(&grid, |x, y, z| (2.0 * x).sin() * y.cos() + z.cos());
    let back = SpectralScalarField::to_spectral(&grid, &f.to_physical())?;
    println!("round trip error: {:.2e}", (&back - &f).max_abs_coeff());

    // d/dx sin(2x)cos(y) = 2 cos(2x)cos(y)
    let fx = partial(&f, 0);
    let exact = SpectralScalarField::from_fn(&grid, |x, y, _| 2.0 * (2.0 * x).cos() * y.cos());
    println!("spectral derivative error: {:.2e}", (&fx - &exact).lp_norm(Exponent::Infinity));

    let v = SpectralVectorField::from_fn(&grid, |x, y, z| [y.sin() + x.cos(), z.sin(), x.sin() * y.cos()]);
    let pv = leray_project(&v);
    println!(
        "|div v|_inf = {:.3e}, |div Pv|_inf = {:.3e}",
        divergence(&v).lp_norm(Exponent::Infinity),
        divergence(&pv).lp_norm(Exponent::Infinity)
    );
    println!("|curl Pv - curl v|_2 = {:.3e}", (&curl(&pv) - &curl(&v)).l2_norm());

    let path = std::env::temp_dir().join("reulab_spectral_basics.bin");
    Snapshot::from_vector(0.5, &pv).write(&path)?;
    let read = Snapshot::read(&path)?;
    let t = read.time;
    println!("snapshot at t = {t} restored exactly: {}", read.into_vector()? == pv);
    let _ = std::fs::remove_file(&path);
    Ok(())
}
