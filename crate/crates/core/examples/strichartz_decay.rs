//! Dispersive decay of the inertial-wave propagator with the rotation rate.
//!
//! cargo run --example strichartz_decay

use reulab::besov::DyadicPartition;
use reulab::diagnostics::{focused_packet, strichartz_decay};
use reulab::Grid;

fn main() -> reulab::Result<()> {
    let grid = Grid::periodic(32)?;
    let partition = DyadicPartition::new(&grid)?;
    let f = focused_packet(&partition, 3, [1.0, 2.0, 3.0])?;
    let r = 4.0;
    let report = strichartz_decay(&f, &[10.0, 30.0, 100.0, 300.0, 1000.0], r, 3, 2.0)?;
    print!("{}", report.to_csv());
    println!("fitted slope {:.4} (predicted {:.4})", report.slope, -1.0 / r);
    println!("tail sensitivity {:.3} (ok: {})", report.tail_sensitivity(), report.tail_ok());
    Ok(())
}
