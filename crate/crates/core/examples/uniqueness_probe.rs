//! Twin runs from nearby data and the Gronwall envelope on their distance.
//!
//! cargo run --example uniqueness_probe

use reulab::solver::{taylor_green, uniqueness_probe, SolverConfig};
use reulab::Grid;

fn main() -> reulab::Result<()> {
    let config = SolverConfig { n: 16, omega: 5.0, dt: 5e-3, t_end: 1.0, ..Default::default() };
    let grid = Grid::periodic(config.n)?;
    let report = uniqueness_probe(&taylor_green(&grid, 1.0), &config, 1e-6, 11)?;
    println!("   t     growth     exp(3U)");
    for i in (0..report.times.len()).step_by(40) {
        println!("{:5.2}   {:.4}     {:.4}", report.times[i], report.growth[i], report.envelope[i]);
    }
    println!("max growth {:.4}, fitted constant {:.4}", report.max_growth(), report.fitted_constant);
    println!("within envelope: {}", report.within_envelope());
    Ok(())
}
