use std::fmt;
use std::str::FromStr;

use crate::error::{LabError, Result};
use crate::spectral::Grid;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    /// Integrating-factor classical Runge–Kutta 4.
    IfRk4,
    /// Fixed-point iteration on the mild (Duhamel) formulation.
    Picard,
}

impl FromStr for Scheme {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "ifrk4" => Ok(Scheme::IfRk4),
            "picard" => Ok(Scheme::Picard),
            other => Err(format!("unknown scheme '{other}' (expected ifrk4 | picard)")),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::IfRk4 => "ifrk4",
            Scheme::Picard => "picard",
        })
    }
}

/// How the advection term is evaluated. Both give the same result after
/// Leray projection; the rotational form needs fewer transforms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NonlinearForm {
    /// `u_k ∂_k u_j`.
    Convective,
    /// `ω × u`, the gradient part `∇|u|²/2` being removed by the projection.
    Rotational,
    /// Linear flow only.
    Off,
}

impl FromStr for NonlinearForm {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "convective" => Ok(NonlinearForm::Convective),
            "rotational" => Ok(NonlinearForm::Rotational),
            "off" => Ok(NonlinearForm::Off),
            other => Err(format!(
                "unknown nonlinear form '{other}' (expected convective | rotational | off)"
            )),
        }
    }
}

impl fmt::Display for NonlinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NonlinearForm::Convective => "convective",
            NonlinearForm::Rotational => "rotational",
            NonlinearForm::Off => "off",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    /// Coriolis parameter Ω (twice the rotation rate).
    pub omega: f64,
    /// Regularizing viscosity δ ∈ [0, 1).
    pub delta: f64,
    pub n: usize,
    pub box_size: f64,
    pub dt: f64,
    pub t_end: f64,
    pub scheme: Scheme,
    pub dealias: bool,
    pub cfl_max: f64,
    pub nonlinear: NonlinearForm,
    /// Store every `snapshot_stride`-th state in the trajectory.
    pub snapshot_stride: usize,
    /// Abort when one step adds more than this to `U(t) = ∫‖∇u‖_∞`.
    pub bkm_ceiling: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            omega: 0.0,
            delta: 0.0,
            n: 32,
            box_size: 2.0 * std::f64::consts::PI,
            dt: 1e-3,
            t_end: 1.0,
            scheme: Scheme::IfRk4,
            dealias: true,
            cfl_max: 0.5,
            nonlinear: NonlinearForm::Rotational,
            snapshot_stride: 0,
            bkm_ceiling: 1e3,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(LabError::InvalidParameter(m));
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt = {} must be positive", self.dt));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return bad(format!("t_end = {} must be positive", self.t_end));
        }
        if !(0.0..1.0).contains(&self.delta) {
            return bad(format!("delta = {} must lie in [0, 1)", self.delta));
        }
        if !self.omega.is_finite() {
            return bad("omega must be finite".into());
        }
        if !(self.cfl_max > 0.0) {
            return bad(format!("cfl_max = {} must be positive", self.cfl_max));
        }
        if !(self.bkm_ceiling > 0.0) {
            return bad(format!("bkm_ceiling = {} must be positive", self.bkm_ceiling));
        }
        self.grid().map(|_| ())
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.n, self.box_size)
    }

    /// Number of steps to reach `t_end`; the last one is shortened when
    /// `t_end` is not a multiple of `dt`.
    pub fn steps(&self) -> usize {
        ((self.t_end / self.dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize
    }

    /// Output times `0, dt, 2dt, .., t_end`.
    pub fn time_grid(&self) -> Vec<f64> {
        let steps = self.steps();
        let mut times: Vec<f64> = (0..steps).map(|i| i as f64 * self.dt).collect();
        times.push(self.t_end);
        times
    }

    /// Length of the final step (equal to `dt` up to rounding when `t_end/dt` is whole).
    pub fn last_step(&self) -> f64 {
        self.t_end - (self.steps() - 1) as f64 * self.dt
    }

    /// `T + T^{1/2} δ^{-1/2}`, the time weight in the contraction condition
    /// of the regularized problem; infinite for `δ = 0`.
    pub fn contraction_time_weight(&self) -> f64 {
        let t = self.t_end;
        if self.delta == 0.0 {
            f64::INFINITY
        } else {
            t + (t / self.delta).sqrt()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn time_grid_lands_on_t_end() {
        let c = SolverConfig { dt: 4e-3, t_end: 0.25, ..Default::default() };
        assert_eq!(c.steps(), 63);
        let t = c.time_grid();
        assert_eq!(t.len(), 64);
        assert_eq!(*t.last().unwrap(), 0.25);
        assert!((c.last_step() - 2e-3).abs() < 1e-15);
        let c = SolverConfig { dt: 1e-3, t_end: 1.0, ..Default::default() };
        assert_eq!(c.steps(), 1000);
        assert!((c.last_step() - 1e-3).abs() < 1e-15);
    }

    #[test]
    fn defaults_validate() {
        SolverConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_out_of_range() {
        let c = SolverConfig { delta: 1.0, ..Default::default() };
        assert!(c.validate().is_err());
        let c = SolverConfig { dt: 0.0, ..Default::default() };
        assert!(c.validate().is_err());
        let c = SolverConfig { t_end: -1.0, ..Default::default() };
        assert!(c.validate().is_err());
        let c = SolverConfig { n: 24, ..Default::default() };
        assert!(c.validate().is_err());
        let c = SolverConfig { omega: -300.0, ..Default::default() };
        assert!(c.validate().is_ok());
    }

    #[test]
    fn time_weight() {
        let c = SolverConfig { delta: 0.25, t_end: 4.0, ..Default::default() };
        assert_eq!(c.contraction_time_weight(), 8.0);
        assert_eq!(SolverConfig::default().contraction_time_weight(), f64::INFINITY);
    }
}
