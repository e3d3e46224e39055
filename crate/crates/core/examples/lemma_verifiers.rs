//! Empirical constants for the harmonic-analysis inequalities.
//!
//! cargo run --example lemma_verifiers

use reulab::verify::{reports_to_csv, LemmaSuite};

fn main() -> reulab::Result<()> {
    let suite = LemmaSuite { n: 16, ensemble_size: 20, seed: 5, low_regularity_commutator: true };
    let reports = suite.run()?;
    print!("{}", reports_to_csv(&reports));
    let again = LemmaSuite { seed: 6, ..suite }.run()?;
    println!("\nseed-to-seed spread:");
    for (a, b) in reports.iter().zip(&again) {
        println!("{:<34} {:.3}", a.lemma_id, a.relative_spread(b));
    }
    Ok(())
}
