//! Fixed-point iteration on the mild formulation of the regularized system.
//!
//! cargo run --example picard_contraction

use reulab::solver::picard::{PICARD_DEFAULT_MAX_ITER, PICARD_DEFAULT_TOL};
use reulab::solver::{picard_solve, run, taylor_green, InitialGuess, Scheme, SolverConfig};
use reulab::Grid;

fn main() -> reulab::Result<()> {
    let config = SolverConfig {
        n: 16,
        omega: 1.0,
        delta: 0.1,
        dt: 1e-3,
        t_end: 0.1,
        scheme: Scheme::Picard,
        ..Default::default()
    };
    let grid = Grid::periodic(config.n)?;
    let u0 = taylor_green(&grid, 1.0);
    let out = picard_solve(&u0, &config, PICARD_DEFAULT_TOL, PICARD_DEFAULT_MAX_ITER, InitialGuess::HeatFlow)?;
    println!("converged in {} iterations", out.iterations);
    println!(" it   sup_t |v_(k+1) - v_k|_2   ratio");
    for (k, inc) in out.increments.iter().enumerate() {
        let ratio = if k > 0 { format!("{:.3}", out.contraction_factors[k - 1]) } else { String::new() };
        println!("{:>3}   {:.3e}                {ratio}", k + 1, inc);
    }

    let stepped = run(&SolverConfig { scheme: Scheme::IfRk4, ..config.clone() }, &u0)?;
    let a = &out.trajectory.states[out.trajectory.states.len() - 1];
    let b = &stepped.final_state;
    println!("fixed point vs time stepping at T: {:.3e}", (a - b).l2_norm() / b.l2_norm());
    Ok(())
}
