//! Lifespan proxy under increasing rotation: the BKM functional `U(t)` at a
//! fixed horizon for a list of rotation rates.

use rayon::prelude::*;

use crate::diagnostics::series::DiagnosticsSeries;
use crate::error::{LabError, Result};
use crate::solver::config::SolverConfig;
use crate::solver::run::{run_with, RunStatus};
use crate::spectral::SpectralVectorField;

#[derive(Clone, Debug)]
pub struct SweepRow {
    pub omega: f64,
    /// First sample time with `U > threshold`, or the end of the run.
    pub t_hit: f64,
    pub crossed: bool,
    /// `U` at the last sample.
    pub u_end: f64,
    pub status: RunStatus,
    pub diagnostics: DiagnosticsSeries,
}

impl SweepRow {
    /// Flagged rows did not reach `t_end`.
    pub fn flagged(&self) -> bool {
        !self.status.is_completed()
    }
}

#[derive(Clone, Debug)]
pub struct LifespanTable {
    pub threshold: f64,
    pub t_end: f64,
    /// Sorted by `|Ω|`, then by `Ω`.
    pub rows: Vec<SweepRow>,
}

impl LifespanTable {
    pub fn row(&self, omega: f64) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.omega == omega)
    }

    /// `U(t_end)` never rises by more than `tolerance` (relative) from one
    /// `|Ω|` to the next larger one.
    pub fn nonincreasing_within(&self, tolerance: f64) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[1].u_end <= w[0].u_end * (1.0 + tolerance))
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("omega,t_hit,crossed,U_end,status\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{:.16e},{:.16e},{},{:.16e},{}\n",
                r.omega,
                r.t_hit,
                r.crossed,
                r.u_end,
                r.status.label()
            ));
        }
        s
    }
}

/// Run the inviscid solver from `u0` for each rate in `omegas` (a zero-rate
/// baseline is always added) and tabulate when `U` first exceeds `threshold`.
pub fn rotation_sweep(
    u0: &SpectralVectorField,
    omegas: &[f64],
    config: &SolverConfig,
    threshold: f64,
) -> Result<LifespanTable> {
    rotation_sweep_with(u0, omegas, config, threshold, DiagnosticsSeries::untracked)
}

/// [`rotation_sweep`] with a caller-supplied diagnostics factory.
pub fn rotation_sweep_with(
    u0: &SpectralVectorField,
    omegas: &[f64],
    config: &SolverConfig,
    threshold: f64,
    series: impl Fn() -> DiagnosticsSeries + Sync,
) -> Result<LifespanTable> {
    if !(threshold > 0.0) {
        return Err(LabError::InvalidParameter(format!("threshold {threshold} must be positive")));
    }
    if omegas.iter().any(|w| !w.is_finite()) {
        return Err(LabError::InvalidParameter("rotation rates must be finite".into()));
    }
    if config.delta != 0.0 {
        log::info!("rotation sweep runs inviscid; ignoring delta = {}", config.delta);
    }
    let mut list: Vec<f64> = omegas.to_vec();
    if !list.contains(&0.0) {
        list.push(0.0);
    }
    list.sort_by(|a, b| a.abs().total_cmp(&b.abs()).then(a.total_cmp(b)));
    list.dedup();

    let rows = list
        .par_iter()
        .map(|&omega| {
            let cfg = SolverConfig { omega, delta: 0.0, ..config.clone() };
            let out = run_with(&cfg, u0, series())?;
            let d = out.diagnostics;
            let hit = d.bkm.iter().position(|u| *u > threshold);
            Ok(SweepRow {
                omega,
                t_hit: hit.map_or(out.final_time, |i| d.times[i]),
                crossed: hit.is_some(),
                u_end: d.last_bkm(),
                status: out.status,
                diagnostics: d,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LifespanTable { threshold, t_end: config.t_end, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::init::taylor_green;
    use crate::spectral::Grid;

    #[test]
    fn baseline_row_is_added_and_sorted() {
        let g = Grid::periodic(16).unwrap();
        let cfg = SolverConfig { n: 16, dt: 0.01, t_end: 0.05, ..Default::default() };
        let t = rotation_sweep(&taylor_green(&g, 1.0), &[50.0, -5.0], &cfg, 1e-3).unwrap();
        let om: Vec<f64> = t.rows.iter().map(|r| r.omega).collect();
        assert_eq!(om, vec![0.0, -5.0, 50.0]);
        assert!(t.rows.iter().all(|r| r.crossed && r.t_hit < 0.05 && !r.flagged()));
        assert!(t.to_csv().starts_with("omega,t_hit,crossed,U_end,status\n"));
    }

    #[test]
    fn cfl_abort_is_flagged_with_partial_data() {
        let g = Grid::periodic(16).unwrap();
        let cfg = SolverConfig { n: 16, dt: 0.2, t_end: 1.0, ..Default::default() };
        let t = rotation_sweep(&taylor_green(&g, 1.0), &[], &cfg, 10.0).unwrap();
        let row = &t.rows[0];
        assert!(row.flagged());
        assert!(!row.crossed);
        assert_eq!(row.diagnostics.len(), 1);
    }
}
