//! Helical projections and the two routes to the Coriolis term.
//!
//! cargo run --example helical_projections

use reulab::random::random_solenoidal;
use reulab::rotation::{
    coriolis_rotation_term, coriolis_rotation_term_helical, leray_project, wave_split,
};
use reulab::spectral::curl;
use reulab::solver::{helical_mode, Helicity};
use reulab::Grid;

fn main() -> reulab::Result<()> {
    let grid = Grid::periodic(16)?;
    let v = random_solenoidal(&grid, 3, 5.0);
    let split = wave_split(&v);
    println!("|P+v + P-v - Pv|_2   = {:.2e}", (&split.sum() - &leray_project(&v)).l2_norm());
    println!("|P+ P+ v - P+ v|_2    = {:.2e}", (&wave_split(&split.plus).plus - &split.plus).l2_norm());
    println!("|P- P+ v|_2           = {:.2e}", wave_split(&split.plus).minus.l2_norm());

    let direct = coriolis_rotation_term(&v)?;
    let helical = coriolis_rotation_term_helical(&v)?;
    println!("P(e3 x v): direct vs helical gap = {:.2e}", (&direct - &helical).l2_norm() / v.l2_norm());

    // a single helical wave is an eigenfunction of curl
    for (h, name) in [(Helicity::Plus, "plus"), (Helicity::Minus, "minus")] {
        let w = helical_mode(&grid, [1, 2, 2], h, 1.0);
        let ratio = curl(&w).l2_norm() / w.l2_norm();
        let s = wave_split(&w);
        println!(
            "helicity {name:<5}: |curl w|/|w| = {ratio:.6} (|k| = 3), |P+w| = {:.3}, |P-w| = {:.3}",
            s.plus.l2_norm(),
            s.minus.l2_norm()
        );
    }
    Ok(())
}
