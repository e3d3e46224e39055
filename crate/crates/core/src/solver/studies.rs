//! Twin-run studies: vanishing-viscosity rate and stability of trajectories.

use rayon::prelude::*;

use crate::diagnostics::grad_sup;
use crate::error::{LabError, Result};
use crate::fit::{loglog_fit, LogFit};
use crate::random::random_solenoidal;
use crate::solver::config::SolverConfig;
use crate::solver::ifrk4::IfRk4;
use crate::solver::run::prepare_initial_data;
use crate::spectral::SpectralVectorField;

/// March two configurations from the same grid in lockstep, calling
/// `visit(t, a, b)` at every step (including `t = 0`).
fn lockstep(
    config_a: &SolverConfig,
    config_b: &SolverConfig,
    a0: &SpectralVectorField,
    b0: &SpectralVectorField,
    mut visit: impl FnMut(f64, &SpectralVectorField, &SpectralVectorField),
) -> Result<()> {
    let grid = a0.grid();
    let (sa, ta) = IfRk4::pair(config_a, grid);
    let (sb, tb) = IfRk4::pair(config_b, grid);
    let times = config_a.time_grid();
    let steps = config_a.steps();
    let (mut a, mut b) = (a0.clone(), b0.clone());
    visit(0.0, &a, &b);
    for step in 1..=steps {
        let t = times[step];
        let last = step == steps;
        a = match (&ta, last) {
            (Some(s), true) => s.step(&a)?,
            _ => sa.step(&a)?,
        };
        b = match (&tb, last) {
            (Some(s), true) => s.step(&b)?,
            _ => sb.step(&b)?,
        };
        if !(a.is_finite() && b.is_finite()) {
            return Err(LabError::NonFinite { time: t });
        }
        visit(t, &a, &b);
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeltaRow {
    pub delta: f64,
    /// `sup_t ‖u^δ(t) − u^{δ/2}(t)‖_{L²}`.
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeltaStudy {
    pub rows: Vec<DeltaRow>,
    /// Fit of gap against δ; `None` when fewer than two positive gaps.
    pub fit: Option<LogFit>,
}

impl DeltaStudy {
    pub fn slope(&self) -> Option<f64> {
        self.fit.as_ref().map(|f| f.slope)
    }

    pub fn gaps_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].gap < w[0].gap)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("delta,gap\n");
        for r in &self.rows {
            s.push_str(&format!("{:.16e},{:.16e}\n", r.delta, r.gap));
        }
        s
    }
}

/// For each `δ` in `deltas`, the sup-in-time L² distance between the runs at
/// `δ` and `δ/2` (all other settings from `config`).
pub fn delta_convergence_study(
    u0: &SpectralVectorField,
    deltas: &[f64],
    config: &SolverConfig,
) -> Result<DeltaStudy> {
    delta_pair_study(u0, &deltas.iter().map(|d| (*d, d / 2.0)).collect::<Vec<_>>(), config)
}

/// Same as [`delta_convergence_study`] with explicit `(δ₁, δ₂)` pairs; the
/// table is indexed by `δ₁`.
pub fn delta_pair_study(
    u0: &SpectralVectorField,
    pairs: &[(f64, f64)],
    config: &SolverConfig,
) -> Result<DeltaStudy> {
    config.validate()?;
    if pairs.iter().any(|(a, b)| !(*a >= 0.0 && *b >= 0.0)) {
        return Err(LabError::InvalidParameter("delta values must be nonnegative".into()));
    }
    let u0 = prepare_initial_data(u0, config.dealias);
    let rows = pairs
        .par_iter()
        .map(|&(d1, d2)| {
            let c1 = SolverConfig { delta: d1, ..config.clone() };
            let c2 = SolverConfig { delta: d2, ..config.clone() };
            let mut gap = 0.0f64;
            lockstep(&c1, &c2, &u0, &u0, |_, a, b| gap = gap.max((a - b).l2_norm()))?;
            Ok(DeltaRow { delta: d1, gap })
        })
        .collect::<Result<Vec<_>>>()?;
    let (xs, ys): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter(|r| r.gap > 0.0 && r.delta > 0.0)
        .map(|r| (r.delta, r.gap))
        .unzip();
    let fit = if xs.len() >= 2 { Some(loglog_fit(&xs, &ys)?) } else { None };
    Ok(DeltaStudy { rows, fit })
}

/// Twin-run growth of a small perturbation.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub times: Vec<f64>,
    /// `‖u − v‖_{L²}(t)`.
    pub difference: Vec<f64>,
    /// `‖u − v‖(t) / ‖u − v‖(0)` (zero when the perturbation vanishes).
    pub growth: Vec<f64>,
    /// Running `∫₀ᵗ ‖∇u‖_∞` of the unperturbed run.
    pub bkm: Vec<f64>,
    /// Smallest `c` with `growth ≤ exp(c·U)` at every sample.
    pub fitted_constant: f64,
    /// `exp(c·U(t))` with the a priori constant [`APRIORI_GROWTH_CONSTANT`].
    pub envelope: Vec<f64>,
}

/// Bound on the operator norm of `∇u` by its largest entry (`‖A‖₂ ≤ 3 max|a_ij|`).
pub const APRIORI_GROWTH_CONSTANT: f64 = 3.0;

impl GrowthReport {
    pub fn max_growth(&self) -> f64 {
        self.growth.iter().copied().fold(0.0, f64::max)
    }

    /// Measured growth stays below the a priori envelope at every sample.
    pub fn within_envelope(&self) -> bool {
        self.growth.iter().zip(&self.envelope).all(|(g, e)| g <= e)
    }
}

/// Run `u0` and `u0 + εw` side by side, `w` a seeded random solenoidal field
/// with `‖εw‖ = perturbation_scale`.
pub fn uniqueness_probe(
    u0: &SpectralVectorField,
    config: &SolverConfig,
    perturbation_scale: f64,
    seed: u64,
) -> Result<GrowthReport> {
    let grid = u0.grid();
    let w = random_solenoidal(grid, seed, (grid.n() / 3) as f64);
    let norm = w.l2_norm();
    let w = if norm > 0.0 { w.scale(perturbation_scale / norm) } else { w };
    uniqueness_probe_with(u0, &w, config)
}

/// [`uniqueness_probe`] with an explicit perturbation.
pub fn uniqueness_probe_with(
    u0: &SpectralVectorField,
    perturbation: &SpectralVectorField,
    config: &SolverConfig,
) -> Result<GrowthReport> {
    config.validate()?;
    if perturbation.divergence_residual() > 1e-10 {
        return Err(LabError::DivergenceViolation {
            residual: perturbation.divergence_residual(),
            bound: 1e-10,
        });
    }
    let u = prepare_initial_data(u0, config.dealias);
    let v = &u + perturbation;
    let mut times = Vec::new();
    let mut difference = Vec::new();
    let mut bkm: Vec<f64> = Vec::new();
    let mut last_grad = 0.0;
    lockstep(config, config, &u, &v, |t, a, b| {
        let g = grad_sup(a);
        let next = match times.last() {
            Some(&prev) => bkm.last().copied().unwrap_or(0.0) + 0.5 * (t - prev) * (g + last_grad),
            None => 0.0,
        };
        last_grad = g;
        times.push(t);
        bkm.push(next);
        difference.push((a - b).l2_norm());
    })?;
    let d0 = difference[0];
    let growth: Vec<f64> = difference.iter().map(|d| if d0 > 0.0 { d / d0 } else { 0.0 }).collect();
    let fitted_constant = growth
        .iter()
        .zip(&bkm)
        .filter(|(g, u)| **u > 0.0 && **g > 0.0)
        .map(|(g, u)| g.ln() / u)
        .fold(0.0, f64::max);
    let envelope = bkm.iter().map(|u| (APRIORI_GROWTH_CONSTANT * u).exp()).collect();
    Ok(GrowthReport { times, difference, growth, bkm, fitted_constant, envelope })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::init::taylor_green;
    use crate::spectral::Grid;

    fn small() -> SolverConfig {
        SolverConfig { n: 16, dt: 0.01, t_end: 0.1, ..Default::default() }
    }

    #[test]
    fn equal_deltas_give_zero_gap() {
        let g = Grid::periodic(16).unwrap();
        let s = delta_pair_study(&taylor_green(&g, 1.0), &[(0.01, 0.01)], &small()).unwrap();
        assert_eq!(s.rows[0].gap, 0.0);
        assert!(s.fit.is_none());
    }

    #[test]
    fn zero_perturbation_stays_zero() {
        let g = Grid::periodic(16).unwrap();
        let r = uniqueness_probe(&taylor_green(&g, 1.0), &small(), 0.0, 1).unwrap();
        assert!(r.difference.iter().all(|d| *d == 0.0));
        assert_eq!(r.fitted_constant, 0.0);
    }

    #[test]
    fn small_perturbation_respects_envelope() {
        let g = Grid::periodic(16).unwrap();
        let r = uniqueness_probe(&taylor_green(&g, 1.0), &small(), 1e-8, 2).unwrap();
        assert!((r.difference[0] / 1e-8 - 1.0).abs() < 1e-6);
        assert!(r.fitted_constant.is_finite());
        assert!(r.within_envelope());
    }
}
