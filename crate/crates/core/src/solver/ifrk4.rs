//! Integrating-factor RK4 (Lawson form). The exact linear flow
//! `E(h) = e^{δhΔ} e^{−hPΩe₃×}` is factored out and classical RK4 is applied
//! to the nonlinear term in the rotating, diffusing frame:
//!
//! ```text
//! k1 = N(u)
//! k2 = N(E(h/2)(u + h/2 k1))
//! k3 = N(E(h/2)u + h/2 k2)
//! k4 = N(E(h)u + h E(h/2)k3)
//! u' = E(h)u + h/6 (E(h)k1 + 2E(h/2)(k2 + k3) + k4)
//! ```

use crate::error::{LabError, Result};
use crate::rotation::LinearFlow;
use crate::solver::config::{NonlinearForm, SolverConfig};
use crate::solver::nonlinear::evaluate;
use crate::spectral::{Exponent, Grid, SpectralVectorField};

pub struct IfRk4 {
    half: LinearFlow,
    full: LinearFlow,
    dt: f64,
    form: NonlinearForm,
    cfl_max: f64,
    dx: f64,
}

impl IfRk4 {
    pub fn new(config: &SolverConfig, grid: &Grid) -> Self {
        Self::with_step(config, grid, config.dt)
    }

    /// Stepper with step `h` in place of `config.dt`.
    pub fn with_step(config: &SolverConfig, grid: &Grid, h: f64) -> Self {
        Self {
            half: LinearFlow::new(grid, config.omega, config.delta, 0.5 * h),
            full: LinearFlow::new(grid, config.omega, config.delta, h),
            dt: h,
            form: config.nonlinear,
            cfl_max: config.cfl_max,
            dx: grid.spacing(),
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Steppers for the regular and the final step of `config`.
    pub(crate) fn pair(config: &SolverConfig, grid: &Grid) -> (Self, Option<Self>) {
        let last = config.last_step();
        let tail = ((last - config.dt).abs() > 1e-12 * config.dt).then(|| Self::with_step(config, grid, last));
        (Self::new(config, grid), tail)
    }

    /// One step from `u`; rejects steps violating the advective CFL bound.
    pub fn step(&self, u: &SpectralVectorField) -> Result<SpectralVectorField> {
        let h = self.dt;
        let (k1, speed) = evaluate(u, self.form);
        let speed = speed.unwrap_or_else(|| u.lp_norm(Exponent::Infinity));
        let ratio = h * speed / self.dx;
        if ratio > self.cfl_max {
            return Err(LabError::Cfl {
                ratio,
                cfl_max: self.cfl_max,
            });
        }
        if self.form == NonlinearForm::Off {
            return Ok(self.full.apply(u));
        }

        let mut a = u.clone();
        a.axpy(0.5 * h, &k1);
        let (k2, _) = evaluate(&self.half.apply(&a), self.form);

        let half_u = self.half.apply(u);
        let mut b = half_u.clone();
        b.axpy(0.5 * h, &k2);
        let (k3, _) = evaluate(&b, self.form);

        let full_u = self.full.apply(u);
        let mut c = full_u.clone();
        c.axpy(h, &self.half.apply(&k3));
        let (k4, _) = evaluate(&c, self.form);

        let mut k23 = k2;
        k23.axpy(1.0, &k3);
        let mut out = full_u;
        out.axpy(h / 6.0, &self.full.apply(&k1));
        out.axpy(h / 3.0, &self.half.apply(&k23));
        out.axpy(h / 6.0, &k4);
        Ok(out)
    }
}

/// Single IF-RK4 step for `config` (builds the linear-flow caches each call).
pub fn step_ifrk4(u: &SpectralVectorField, config: &SolverConfig) -> Result<SpectralVectorField> {
    IfRk4::new(config, u.grid()).step(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rotation::{coriolis_propagator, heat_propagator};
    use crate::solver::init::random_spectrum;

    #[test]
    fn linear_step_is_exact() {
        let g = Grid::periodic(16).unwrap();
        let u = random_spectrum(&g, 2.0, 1.0, 4);
        for (omega, delta) in [(0.0, 0.0), (40.0, 0.0), (-7.0, 0.2)] {
            let cfg = SolverConfig {
                n: 16,
                omega,
                delta,
                dt: 0.01,
                nonlinear: NonlinearForm::Off,
                ..Default::default()
            };
            let stepped = step_ifrk4(&u, &cfg).unwrap();
            let exact = heat_propagator(&coriolis_propagator(&u, omega, 0.01), delta, 0.01).unwrap();
            assert!((&stepped - &exact).l2_norm() <= 1e-12 * u.l2_norm());
        }
    }

    #[test]
    fn cfl_violation_reports_ratio() {
        let g = Grid::periodic(16).unwrap();
        let u = random_spectrum(&g, 2.0, 50.0, 4);
        let cfg = SolverConfig { n: 16, dt: 0.5, ..Default::default() };
        match step_ifrk4(&u, &cfg) {
            Err(LabError::Cfl { ratio, cfl_max }) => assert!(ratio > cfl_max),
            other => panic!("expected CFL error, got {other:?}"),
        }
    }
}
