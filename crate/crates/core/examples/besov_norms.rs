//! Littlewood-Paley blocks and Besov norms.
//!
//! cargo run --example besov_norms

use reulab::besov::{besov_norm, lp_block, BesovIndex, DyadicPartition};
use reulab::random::random_scalar;
use reulab::spectral::{laplacian, Exponent};
use reulab::Grid;

fn main() -> reulab::Result<()> {
    let grid = Grid::periodic(32)?;
    let partition = DyadicPartition::new(&grid)?;
    println!("shells j = {}..={}", partition.j_min(), partition.j_max());
    println!("partition of unity residual: {:.2e}", partition.partition_residual());

    let f = random_scalar(&grid, 7, 10.0);
    println!("\n j   |D_j f|_2     |D_j f|_inf");
    for j in partition.shells() {
        let b = lp_block(&f, &partition, j)?;
        println!("{j:>2}   {:.4e}   {:.4e}", b.lp_norm(Exponent::Two), b.lp_norm(Exponent::Infinity));
    }

    use Exponent::*;
    println!();
    for idx in [
        BesovIndex::inhomogeneous(0.0, Two, Two),
        BesovIndex::inhomogeneous(1.5, Two, One),
        BesovIndex::inhomogeneous(2.5, Two, One),
        BesovIndex::homogeneous(2.5, Two, One),
        BesovIndex::inhomogeneous(1.0, Infinity, One),
    ] {
        println!("{:<22} {:.5e}", idx.label(), besov_norm(&f, &partition, &idx));
    }

    // two derivatives cost two units of smoothness, shell by shell
    let lf = laplacian(&f);
    let a = besov_norm(&lf, &partition, &BesovIndex::homogeneous(0.5, Two, One));
    let b = besov_norm(&f, &partition, &BesovIndex::homogeneous(2.5, Two, One));
    println!("\n|lap f|_(B^0.5) / |f|_(B^2.5) = {:.4}", a / b);
    Ok(())
}
