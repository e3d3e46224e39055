//! Fixed-point iteration on the mild formulation of the regularized problem
//!
//! ```text
//! B(v)(t) = e^{δtΔ}u₀ − ∫₀ᵗ e^{δ(t−τ)Δ} [PΩe₃×v + P(v·∇)v](τ) dτ
//! ```
//!
//! on the step grid `t_i = i·dt` (last step shortened to land on `t_end`),
//! with composite-trapezoid quadrature of the Duhamel integral.

use crate::error::{LabError, Result};
use crate::rotation::{coriolis_rotation_term, heat_propagator};
use crate::solver::config::SolverConfig;
use crate::solver::nonlinear::evaluate;
use crate::solver::run::Trajectory;
use crate::spectral::SpectralVectorField;

pub const PICARD_DEFAULT_TOL: f64 = 1e-10;
pub const PICARD_DEFAULT_MAX_ITER: usize = 200;

/// Starting trajectory `v⁰`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitialGuess {
    /// `v⁰(t) = e^{δtΔ}u₀`.
    HeatFlow,
    /// `v⁰(t) = u₀`.
    Frozen,
}

#[derive(Clone, Debug)]
pub struct PicardOutcome {
    pub trajectory: Trajectory,
    /// `sup_t ‖v^{m+1} − v^m‖_{L²}` per iteration.
    pub increments: Vec<f64>,
    /// Successive increment ratios.
    pub contraction_factors: Vec<f64>,
    pub iterations: usize,
}

/// Iterate `v ↦ B(v)` until the sup-in-time L² increment drops below `tol`.
pub fn picard_solve(
    u0: &SpectralVectorField,
    config: &SolverConfig,
    tol: f64,
    max_iter: usize,
    guess: InitialGuess,
) -> Result<PicardOutcome> {
    config.validate()?;
    if config.delta <= 0.0 {
        return Err(LabError::InvalidParameter(
            "Picard mode needs delta > 0 (heat smoothing of the mild formulation)".into(),
        ));
    }
    let times = config.time_grid();
    let heat_step = |v: &SpectralVectorField, h: f64| heat_propagator(v, config.delta, h);

    let free: Vec<SpectralVectorField> = {
        let mut out = Vec::with_capacity(times.len());
        let mut v = u0.clone();
        out.push(v.clone());
        for w in times.windows(2) {
            v = heat_step(&v, w[1] - w[0])?;
            out.push(v.clone());
        }
        out
    };
    let mut current = match guess {
        InitialGuess::HeatFlow => free.clone(),
        InitialGuess::Frozen => vec![u0.clone(); times.len()],
    };

    let mut increments = Vec::new();
    for iteration in 1..=max_iter {
        let forcing = current
            .iter()
            .map(|v| duhamel_integrand(v, config))
            .collect::<Result<Vec<_>>>()?;
        let mut next = Vec::with_capacity(times.len());
        let mut integral = SpectralVectorField::zeros(u0.grid());
        next.push(u0.clone());
        for i in 1..times.len() {
            // I_i = H(h) I_{i-1} + h/2 (H(h) F_{i-1} + F_i)
            let h = times[i] - times[i - 1];
            let mut carried = heat_step(&integral, h)?;
            carried.axpy(0.5 * h, &heat_step(&forcing[i - 1], h)?);
            carried.axpy(0.5 * h, &forcing[i]);
            integral = carried;
            next.push(&free[i] - &integral);
        }
        let increment = next
            .iter()
            .zip(&current)
            .map(|(a, b)| (a - b).l2_norm())
            .fold(0.0, f64::max);
        if !increment.is_finite() {
            return Err(LabError::PicardDiverged { iterations: iteration, last_increment: increment });
        }
        increments.push(increment);
        current = next;
        if increment < tol {
            let contraction_factors = increments.windows(2).map(|w| w[1] / w[0]).collect();
            let mut trajectory = Trajectory::new(config.clone());
            for (t, s) in times.into_iter().zip(current) {
                trajectory.push(t, s);
            }
            return Ok(PicardOutcome {
                trajectory,
                increments,
                contraction_factors,
                iterations: iteration,
            });
        }
    }
    Err(LabError::PicardDiverged {
        iterations: max_iter,
        last_increment: increments.last().copied().unwrap_or(f64::NAN),
    })
}

/// `PΩe₃×v + P(v·∇)v`.
fn duhamel_integrand(v: &SpectralVectorField, config: &SolverConfig) -> Result<SpectralVectorField> {
    let mut f = coriolis_rotation_term(v)?.scale(config.omega);
    // evaluate returns −P(v·∇)v
    let (n, _) = evaluate(v, config.nonlinear);
    f.axpy(-1.0, &n);
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::init::taylor_green;
    use crate::spectral::Grid;

    fn config() -> SolverConfig {
        SolverConfig { n: 16, omega: 1.0, delta: 0.1, dt: 0.01, t_end: 0.1, ..Default::default() }
    }

    #[test]
    fn zero_data_is_a_fixed_point() {
        let g = Grid::periodic(16).unwrap();
        let out = picard_solve(&SpectralVectorField::zeros(&g), &config(), 1e-12, 10, InitialGuess::HeatFlow).unwrap();
        assert_eq!(out.iterations, 1);
        assert_eq!(out.increments, vec![0.0]);
    }

    #[test]
    fn needs_positive_delta() {
        let g = Grid::periodic(16).unwrap();
        let cfg = SolverConfig { delta: 0.0, ..config() };
        assert!(picard_solve(&taylor_green(&g, 1.0), &cfg, 1e-10, 10, InitialGuess::HeatFlow).is_err());
    }

    #[test]
    fn reports_divergence_when_iterations_run_out() {
        let g = Grid::periodic(16).unwrap();
        let err = picard_solve(&taylor_green(&g, 1.0), &config(), 1e-14, 2, InitialGuess::Frozen).unwrap_err();
        assert!(matches!(err, LabError::PicardDiverged { iterations: 2, .. }));
    }
}
