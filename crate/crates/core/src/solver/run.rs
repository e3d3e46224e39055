use crate::diagnostics::DiagnosticsSeries;
use crate::error::{LabError, Result};
use crate::rotation::leray_project;
use crate::solver::config::{Scheme, SolverConfig};
use crate::solver::ifrk4::IfRk4;
use crate::solver::picard::{picard_solve, InitialGuess, PICARD_DEFAULT_MAX_ITER, PICARD_DEFAULT_TOL};
use crate::spectral::SpectralVectorField;

/// Stored states of a run.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<SpectralVectorField>,
    pub config: SolverConfig,
}

impl Trajectory {
    pub fn new(config: SolverConfig) -> Self {
        Self { times: Vec::new(), states: Vec::new(), config }
    }

    pub fn push(&mut self, t: f64, state: SpectralVectorField) {
        self.times.push(t);
        self.states.push(state);
    }

    pub fn last(&self) -> Option<(f64, &SpectralVectorField)> {
        self.times.last().copied().zip(self.states.last())
    }

    /// Worst relative divergence over all stored states.
    pub fn max_divergence(&self) -> f64 {
        self.states.iter().map(|s| s.divergence_residual()).fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RunStatus {
    Completed,
    /// One step increased `U` by more than the configured ceiling.
    BkmGuard { time: f64, increment: f64 },
    /// The state stopped being finite; the trajectory ends at the last good state.
    NonFinite { time: f64 },
    /// A step was refused (e.g. CFL); the trajectory ends at the last good state.
    Aborted { time: f64, reason: String },
}

impl RunStatus {
    pub fn is_completed(&self) -> bool {
        matches!(self, RunStatus::Completed)
    }

    /// Short label for tables and reports.
    pub fn label(&self) -> String {
        match self {
            RunStatus::Completed => "completed".into(),
            RunStatus::BkmGuard { time, .. } => format!("bkm-guard@{time}"),
            RunStatus::NonFinite { time } => format!("non-finite@{time}"),
            RunStatus::Aborted { time, .. } => format!("aborted@{time}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub trajectory: Trajectory,
    pub diagnostics: DiagnosticsSeries,
    pub status: RunStatus,
    /// Last finite state and its time.
    pub final_time: f64,
    pub final_state: SpectralVectorField,
}

/// Projects, de-means and (optionally) dealiases initial data, logging changes.
pub fn prepare_initial_data(u0: &SpectralVectorField, dealias: bool) -> SpectralVectorField {
    let mut u = u0.clone();
    if u.divergence_residual() > 1e-12 || u.mean().iter().any(|m| *m != 0.0) {
        log::info!(
            "initial data auto-projected (divergence residual {:.3e}, mean {:?})",
            u.divergence_residual(),
            u.mean()
        );
        u = leray_project(&u);
    }
    if dealias {
        let d = u.dealias();
        if d != u {
            log::info!("initial data truncated by the 2/3 rule");
        }
        u = d;
    }
    u.zero_nyquist();
    u
}

/// Evolve `u0` under `config`, sampling diagnostics every step.
pub fn run(config: &SolverConfig, u0: &SpectralVectorField) -> Result<RunOutput> {
    run_with(config, u0, DiagnosticsSeries::for_grid(u0.grid()))
}

/// [`run`] with a caller-chosen diagnostics series (e.g. without Besov tracking).
pub fn run_with(
    config: &SolverConfig,
    u0: &SpectralVectorField,
    mut diagnostics: DiagnosticsSeries,
) -> Result<RunOutput> {
    config.validate()?;
    let grid = config.grid()?;
    if *u0.grid() != grid {
        return Err(LabError::GridMismatch);
    }
    let u0 = prepare_initial_data(u0, config.dealias);
    match config.scheme {
        Scheme::IfRk4 => run_ifrk4(config, u0, diagnostics),
        Scheme::Picard => {
            let outcome = picard_solve(
                &u0,
                config,
                PICARD_DEFAULT_TOL,
                PICARD_DEFAULT_MAX_ITER,
                InitialGuess::HeatFlow,
            )?;
            let traj = outcome.trajectory;
            for (t, s) in traj.times.iter().zip(&traj.states) {
                diagnostics.bkm_update(*t, s)?;
            }
            let (final_time, final_state) = traj.last().map(|(t, s)| (t, s.clone())).expect("nonempty");
            Ok(RunOutput {
                trajectory: traj,
                diagnostics,
                status: RunStatus::Completed,
                final_time,
                final_state,
            })
        }
    }
}

fn run_ifrk4(
    config: &SolverConfig,
    u0: SpectralVectorField,
    mut diagnostics: DiagnosticsSeries,
) -> Result<RunOutput> {
    let (stepper, tail) = IfRk4::pair(config, u0.grid());
    let times = config.time_grid();
    let steps = config.steps();
    let stride = config.snapshot_stride;
    let mut traj = Trajectory::new(config.clone());
    traj.push(0.0, u0.clone());
    diagnostics.bkm_update(0.0, &u0)?;

    let mut u = u0;
    let mut time = 0.0;
    let mut status = RunStatus::Completed;
    for step in 1..=steps {
        let t = times[step];
        let next = match (&tail, step == steps) {
            (Some(last), true) => last.step(&u),
            _ => stepper.step(&u),
        };
        let next = match next {
            Ok(v) => v,
            Err(e) => {
                log::warn!("step to t = {t} refused: {e}");
                status = RunStatus::Aborted { time: t, reason: e.to_string() };
                break;
            }
        };
        if !next.is_finite() {
            log::warn!("non-finite state at t = {t}; stopping at t = {time}");
            status = RunStatus::NonFinite { time: t };
            break;
        }
        let before = diagnostics.last_bkm();
        diagnostics.bkm_update(t, &next)?;
        u = next;
        time = t;
        let increment = diagnostics.last_bkm() - before;
        if stride > 0 && step % stride == 0 && step != steps {
            traj.push(t, u.clone());
        }
        if increment > config.bkm_ceiling {
            log::warn!("BKM guard tripped at t = {t}: increment {increment:.3e}");
            status = RunStatus::BkmGuard { time: t, increment };
            break;
        }
    }
    if traj.times.last() != Some(&time) {
        traj.push(time, u.clone());
    }
    Ok(RunOutput {
        trajectory: traj,
        diagnostics,
        status,
        final_time: time,
        final_state: u,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::init::{helical_mode, taylor_green, Helicity};
    use crate::spectral::Grid;

    #[test]
    fn viscous_run_dissipates_energy() {
        let g = Grid::periodic(16).unwrap();
        let cfg = SolverConfig { n: 16, delta: 0.05, dt: 0.01, t_end: 0.2, ..Default::default() };
        let out = run_with(&cfg, &taylor_green(&g, 1.0), DiagnosticsSeries::untracked()).unwrap();
        assert!(out.status.is_completed());
        assert!(out.diagnostics.energy.windows(2).all(|w| w[1] < w[0]));
        assert_eq!(out.diagnostics.len(), 21);
        assert!(out.trajectory.max_divergence() <= 1e-8);
        assert!(out.final_state.mean().iter().all(|m| *m == 0.0));
    }

    #[test]
    fn bkm_guard_stops_run() {
        let g = Grid::periodic(16).unwrap();
        let cfg = SolverConfig { n: 16, dt: 0.01, t_end: 0.2, bkm_ceiling: 1e-3, ..Default::default() };
        let out = run_with(&cfg, &taylor_green(&g, 1.0), DiagnosticsSeries::untracked()).unwrap();
        assert!(matches!(out.status, RunStatus::BkmGuard { .. }));
        assert_eq!(out.diagnostics.len(), 2);
    }

    #[test]
    fn non_solenoidal_data_is_projected() {
        let g = Grid::periodic(16).unwrap();
        let raw = crate::random::random_vector(&g, 3, 4.0);
        let cfg = SolverConfig { n: 16, dt: 0.01, t_end: 0.02, ..Default::default() };
        let out = run_with(&cfg, &raw, DiagnosticsSeries::untracked()).unwrap();
        assert!(out.trajectory.states[0].divergence_residual() <= 1e-12);
    }

    #[test]
    fn snapshots_follow_stride() {
        let g = Grid::periodic(16).unwrap();
        let u = helical_mode(&g, [1, 0, 1], Helicity::Plus, 1.0);
        let cfg = SolverConfig { n: 16, dt: 0.01, t_end: 0.1, snapshot_stride: 4, ..Default::default() };
        let out = run_with(&cfg, &u, DiagnosticsSeries::untracked()).unwrap();
        let times: Vec<f64> = out.trajectory.times.iter().map(|t| (t * 100.0).round()).collect();
        assert_eq!(times, vec![0.0, 4.0, 8.0, 10.0]);
    }
}
