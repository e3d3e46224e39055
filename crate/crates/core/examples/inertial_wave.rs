//! A single Beltrami mode under fast rotation: the nonlinear solver against
//! the exact inertial-wave propagator.
//!
//! cargo run --example inertial_wave

use reulab::rotation::coriolis_propagator;
use reulab::solver::{helical_mode, run, Helicity, SolverConfig};
use reulab::Grid;

fn main() -> reulab::Result<()> {
    let omega = 50.0;
    let config = SolverConfig { n: 16, omega, dt: 1e-3, t_end: 1.0, snapshot_stride: 250, ..Default::default() };
    let grid = Grid::periodic(config.n)?;
    let u0 = helical_mode(&grid, [1, 0, 1], Helicity::Plus, 1.0);
    let out = run(&config, &u0)?;
    println!("status: {}", out.status.label());
    println!("   t      |u - exact|_2 / |u0|_2");
    for (t, u) in out.trajectory.times.iter().zip(&out.trajectory.states) {
        let exact = coriolis_propagator(&u0, omega, *t);
        println!("{t:5.2}    {:.3e}", (u - &exact).l2_norm() / u0.l2_norm());
    }
    // the wave frequency is omega * k3/|k|
    println!("frequency: {:.4}", omega / 2f64.sqrt());
    Ok(())
}
