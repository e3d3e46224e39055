//! Inviscid Taylor-Green run: energy conservation and the blow-up functional.
//!
//! cargo run --example taylor_green_energy

use reulab::solver::{run, taylor_green, SolverConfig};
use reulab::Grid;

fn main() -> reulab::Result<()> {
    let config = SolverConfig { n: 32, dt: 2e-3, t_end: 1.0, ..Default::default() };
    let grid = Grid::periodic(config.n)?;
    let out = run(&config, &taylor_green(&grid, 1.0))?;
    let d = &out.diagnostics;
    println!("status: {}, steps: {}", out.status.label(), config.steps());
    println!("relative energy drift: {:.3e}", d.energy_drift());
    println!("   t     |grad u|_inf   U(t)      B^(5/2)_(2,1)");
    let besov = d.tracked("besov_5_2").expect("tracked by default");
    for i in (0..d.len()).step_by(50) {
        println!("{:5.2}   {:.5}      {:.5}   {:.5}", d.times[i], d.grad_sup[i], d.bkm[i], besov.values[i]);
    }
    println!("U(T) = {:.6}", d.last_bkm());
    Ok(())
}
