//! Vanishing-regularization study: distance between runs at delta and delta/2.
//!
//! cargo run --example delta_convergence

use reulab::solver::{delta_convergence_study, taylor_green, SolverConfig};
use reulab::Grid;

fn main() -> reulab::Result<()> {
    let config = SolverConfig { n: 16, dt: 5e-3, t_end: 0.5, ..Default::default() };
    let grid = Grid::periodic(config.n)?;
    let study = delta_convergence_study(&taylor_green(&grid, 1.0), &[0.1, 0.03, 0.01, 0.003, 0.001], &config)?;
    print!("{}", study.to_csv());
    println!("gaps decreasing: {}", study.gaps_decreasing());
    if let Some(s) = study.slope() {
        println!("log-log slope: {s:.3}");
    }
    Ok(())
}
