//! Desk-scale acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.
//!
//! cargo test --test acceptance

use std::time::{Duration, Instant};

use reulab::besov::{lp_block, psi_part, DyadicPartition};
use reulab::diagnostics::{focused_packet, rotation_sweep, strichartz_decay, DiagnosticsSeries};
use reulab::fit::loglog_fit;
use reulab::random::{random_scalar, random_solenoidal};
use reulab::rotation::{coriolis_propagator, coriolis_rotation_term, coriolis_rotation_term_helical, wave_split};
use reulab::solver::picard::PICARD_DEFAULT_MAX_ITER;
use reulab::solver::{
    delta_convergence_study, helical_mode, picard_solve, run_with, taylor_green, Helicity, InitialGuess,
    Scheme, SolverConfig,
};
use reulab::spectral::Exponent::Two;
use reulab::verify::LemmaSuite;
use reulab::{Grid, Result, SpectralScalarField, SpectralVectorField};

type Criterion = (&'static str, fn() -> Result<Verdict>);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Result<Verdict> {
    Ok(Verdict { pass, detail: detail.into() })
}

fn rel(a: &SpectralVectorField, b: &SpectralVectorField) -> f64 {
    (a - b).l2_norm() / b.l2_norm().max(f64::MIN_POSITIVE)
}

fn energy_conservation() -> Result<Verdict> {
    let config = SolverConfig { n: 32, dt: 1e-3, t_end: 1.0, ..Default::default() };
    let grid = config.grid()?;
    let start = Instant::now();
    let out = run_with(&config, &taylor_green(&grid, 1.0), DiagnosticsSeries::untracked())?;
    let elapsed = start.elapsed();
    let drift = out.diagnostics.energy_drift();
    verdict(
        out.status.is_completed() && drift <= 1e-8 && elapsed <= Duration::from_secs(120),
        format!("drift {drift:.2e} <= 1e-8, {:.1}s <= 120s", elapsed.as_secs_f64()),
    )
}

fn projection_identities() -> Result<Verdict> {
    let grid = Grid::periodic(32)?;
    let mut worst = 0.0f64;
    for seed in 0..50 {
        let v = random_solenoidal(&grid, 1000 + seed, 16.0);
        let split = wave_split(&v);
        let plus_split = wave_split(&split.plus);
        let minus_split = wave_split(&split.minus);
        let scale = v.l2_norm();
        let residuals = [
            rel(&split.sum(), &v),
            plus_split.minus.l2_norm() / scale,
            minus_split.plus.l2_norm() / scale,
            rel(&coriolis_rotation_term_helical(&v)?, &coriolis_rotation_term(&v)?),
        ];
        worst = residuals.into_iter().fold(worst, f64::max);
    }
    verdict(worst <= 1e-10, format!("max residual {worst:.2e} <= 1e-10 over 50 fields"))
}

fn partition_of_unity() -> Result<Verdict> {
    let grid = Grid::periodic(32)?;
    let p = DyadicPartition::new(&grid)?;
    let unity = p.partition_residual().max(p.inhomogeneous_residual());
    let mut recon = 0.0f64;
    for seed in 0..50 {
        let mut f = random_scalar(&grid, 2000 + seed, f64::INFINITY);
        f.zero_nyquist();
        let mut inhom = psi_part(&f, &p);
        for j in 1.max(p.j_min())..=p.j_max() {
            inhom += &lp_block(&f, &p, j)?;
        }
        let mut g = f.clone();
        g.zero_mean();
        let mut hom = SpectralScalarField::zeros(&grid);
        for j in p.shells() {
            hom += &lp_block(&g, &p, j)?;
        }
        recon = recon
            .max((&inhom - &f).lp_norm(Two) / f.lp_norm(Two))
            .max((&hom - &g).lp_norm(Two) / g.lp_norm(Two));
    }
    verdict(
        unity <= 1e-12 && recon <= 1e-10,
        format!("unity {unity:.2e} <= 1e-12, reconstruction {recon:.2e} <= 1e-10"),
    )
}

fn beltrami_wave() -> Result<Verdict> {
    let omega = 50.0;
    let config = SolverConfig { n: 32, omega, dt: 1e-3, t_end: 1.0, ..Default::default() };
    let grid = config.grid()?;
    let u0 = helical_mode(&grid, [1, 0, 1], Helicity::Plus, 1.0);
    let out = run_with(&config, &u0, DiagnosticsSeries::untracked())?;
    let exact = coriolis_propagator(&u0, omega, out.final_time);
    let err = (&out.final_state - &exact).l2_norm();
    verdict(out.status.is_completed() && err <= 1e-6, format!("L2 error {err:.2e} <= 1e-6"))
}

fn rk4_order() -> Result<Verdict> {
    let base = SolverConfig { n: 32, t_end: 0.25, ..Default::default() };
    let grid = base.grid()?;
    let u0 = taylor_green(&grid, 4.0);
    let solve = |dt: f64| -> Result<SpectralVectorField> {
        let c = SolverConfig { dt, ..base.clone() };
        Ok(run_with(&c, &u0, DiagnosticsSeries::untracked())?.final_state)
    };
    let reference = solve(1.25e-4)?;
    let dts = [4e-3, 2e-3, 1e-3];
    let errors = dts
        .iter()
        .map(|&dt| Ok((&solve(dt)? - &reference).l2_norm()))
        .collect::<Result<Vec<f64>>>()?;
    let fit = loglog_fit(&dts, &errors)?;
    let pairwise: Vec<f64> = errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let ok = (fit.slope - 4.0).abs() <= 0.3 && pairwise.iter().all(|s| (s - 4.0).abs() <= 0.3);
    verdict(
        ok,
        format!(
            "slope {:.3} (pairwise {:.3}, {:.3}), errors {:.2e} {:.2e} {:.2e}",
            fit.slope, pairwise[0], pairwise[1], errors[0], errors[1], errors[2]
        ),
    )
}

fn delta_rate() -> Result<Verdict> {
    let config = SolverConfig { n: 32, dt: 5e-3, t_end: 0.5, ..Default::default() };
    let grid = config.grid()?;
    let study = delta_convergence_study(&taylor_green(&grid, 1.0), &[1e-1, 3e-2, 1e-2, 3e-3, 1e-3], &config)?;
    let slope = study.slope().unwrap_or(f64::NAN);
    verdict((slope - 1.0).abs() <= 0.2, format!("slope {slope:.3} in 1.0 +- 0.2"))
}

fn strichartz_exponent() -> Result<Verdict> {
    let start = Instant::now();
    let grid = Grid::periodic(32)?;
    let partition = DyadicPartition::new(&grid)?;
    let f = focused_packet(&partition, 3, [1.0, 2.0, 3.0])?;
    let report = strichartz_decay(&f, &[10.0, 30.0, 100.0, 300.0, 1000.0], 4.0, 3, 2.0)?;
    let elapsed = start.elapsed();
    let tail = report.tail_sensitivity();
    verdict(
        (report.slope + 0.25).abs() <= 0.05 && tail < 0.05 && elapsed <= Duration::from_secs(300),
        format!(
            "slope {:.4} in -0.25 +- 0.05, tail {:.3} < 0.05, {:.1}s <= 300s",
            report.slope,
            tail,
            elapsed.as_secs_f64()
        ),
    )
}

fn picard_contraction() -> Result<Verdict> {
    let config = SolverConfig {
        n: 16,
        omega: 1.0,
        delta: 0.1,
        dt: 1e-3,
        t_end: 0.1,
        scheme: Scheme::Picard,
        ..Default::default()
    };
    let grid = config.grid()?;
    let u0 = taylor_green(&grid, 1e-3);
    let tol = 1e-10;
    let a = picard_solve(&u0, &config, tol, PICARD_DEFAULT_MAX_ITER, InitialGuess::HeatFlow)?;
    let b = picard_solve(&u0, &config, tol, PICARD_DEFAULT_MAX_ITER, InitialGuess::Frozen)?;
    let worst_ratio = a
        .contraction_factors
        .iter()
        .chain(&b.contraction_factors)
        .copied()
        .fold(0.0, f64::max);
    let gap = a
        .trajectory
        .states
        .iter()
        .zip(&b.trajectory.states)
        .map(|(x, y)| (x - y).l2_norm())
        .fold(0.0, f64::max);
    verdict(
        worst_ratio < 0.5 && gap <= 10.0 * tol,
        format!(
            "max ratio {worst_ratio:.3} < 0.5, guesses differ by {gap:.2e} <= {:.0e} ({} and {} iterations)",
            10.0 * tol,
            a.iterations,
            b.iterations
        ),
    )
}

fn rotation_suppression() -> Result<Verdict> {
    let config = SolverConfig { n: 32, dt: 1e-3, t_end: 1.0, ..Default::default() };
    let grid = config.grid()?;
    let table = rotation_sweep(&taylor_green(&grid, 1.0), &[0.0, 100.0, 500.0], &config, 1e6)?;
    let u = |w: f64| table.row(w).map_or(f64::NAN, |r| r.u_end);
    let completed = table.rows.iter().all(|r| !r.flagged());
    verdict(
        completed && u(500.0) < u(0.0) && table.nonincreasing_within(0.10),
        format!("U(T): {:.5} (0), {:.5} (100), {:.5} (500)", u(0.0), u(100.0), u(500.0)),
    )
}

fn verifier_stability() -> Result<Verdict> {
    let a = LemmaSuite { seed: 1, ..Default::default() }.run()?;
    let b = LemmaSuite { seed: 2, ..Default::default() }.run()?;
    let finite = a.iter().chain(&b).all(|r| r.is_finite());
    let (worst, id) = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x.relative_spread(y), x.lemma_id.clone()))
        .fold((0.0, String::new()), |acc, x| if x.0 > acc.0 { x } else { acc });
    verdict(
        finite && worst <= 0.2 && a.len() == b.len(),
        format!("{} reports finite: {finite}, worst spread {worst:.3} ({id}) <= 0.2", a.len()),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("energy conservation", energy_conservation),
        ("projection identities", projection_identities),
        ("partition of unity", partition_of_unity),
        ("Beltrami inertial wave", beltrami_wave),
        ("IF-RK4 order", rk4_order),
        ("vanishing-viscosity rate", delta_rate),
        ("Strichartz exponent", strichartz_exponent),
        ("Picard contraction", picard_contraction),
        ("rotation suppression", rotation_suppression),
        ("verifier stability", verifier_stability),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match check() {
            Ok(v) => (v.pass, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<26} {}  {} [{:.1}s]",
            i + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            detail,
            start.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria pass");
}
