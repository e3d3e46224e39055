//! Scenario pipelines and run-directory layout.
//!
//! ```text
//! <output>/
//!   config.copy        persisted scenario with defaults filled in
//!   diagnostics.csv    single-run time series
//!   besov.csv          tracked Besov norms, long format
//!   snapshots/         binary spectral states
//!   report.txt         headline numbers
//! ```
//!
//! Sweeps put one `omega_<rate>/diagnostics.csv` per rate next to a
//! `sweep.csv` summary.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::besov::DyadicPartition;
use crate::diagnostics::{focused_packet, rotation_sweep_with, strichartz_decay, DiagnosticsSeries};
use crate::error::{LabError, Result};
use crate::lab::config::{ScenarioKind, ScenarioSpec};
use crate::solver::{delta_convergence_study, run_with};
use crate::spectral::Snapshot;
use crate::verify::{reports_to_csv, LemmaSuite};

pub const CONFIG_COPY: &str = "config.copy";
pub const DIAGNOSTICS_CSV: &str = "diagnostics.csv";
pub const BESOV_CSV: &str = "besov.csv";
pub const SNAPSHOT_DIR: &str = "snapshots";
pub const REPORT_TXT: &str = "report.txt";
pub const SWEEP_CSV: &str = "sweep.csv";
pub const DELTA_CSV: &str = "delta_study.csv";
pub const DECAY_CSV: &str = "decay.csv";
pub const LEMMAS_CSV: &str = "lemmas.csv";

#[derive(Clone, Debug, PartialEq)]
pub enum ExecStatus {
    Ok,
    /// The pipeline stopped early; artifacts up to that point were written.
    Aborted(String),
}

#[derive(Clone, Debug)]
pub struct Execution {
    pub dir: PathBuf,
    pub status: ExecStatus,
    pub report: String,
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, contents).map_err(|e| LabError::io(path, e))
}

/// Create (or, with `force`, recreate) the run directory. Only directories
/// that already hold a `config.copy` are ever removed.
pub fn prepare_run_dir(dir: &Path, force: bool) -> Result<()> {
    if dir.exists() {
        let empty = fs::read_dir(dir).map_err(|e| LabError::io(dir, e))?.next().is_none();
        if !empty {
            if !force {
                return Err(LabError::Refused(format!(
                    "{} already exists; pass --force to overwrite",
                    dir.display()
                )));
            }
            if !dir.join(CONFIG_COPY).is_file() {
                return Err(LabError::Refused(format!(
                    "{} is not a run directory (no {CONFIG_COPY}); refusing to overwrite",
                    dir.display()
                )));
            }
            fs::remove_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
        }
    }
    fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))
}

pub fn execute(spec: &ScenarioSpec, force: bool) -> Result<Execution> {
    let dir = spec.output.clone();
    prepare_run_dir(&dir, force)?;
    write(&dir.join(CONFIG_COPY), spec.to_config_text())?;

    let mut report = String::new();
    let _ = writeln!(report, "scenario: {}", spec.name);
    let _ = writeln!(report, "kind: {}", spec.kind.label());
    let _ = writeln!(report, "seed: {}", spec.seed);

    let status = match &spec.kind {
        ScenarioKind::SingleRun => single_run(spec, &dir, &mut report)?,
        ScenarioKind::DeltaStudy { deltas } => {
            let study = delta_convergence_study(&spec.initial_data()?, deltas, &spec.solver)?;
            write(&dir.join(DELTA_CSV), study.to_csv())?;
            let _ = writeln!(report, "delta,gap");
            for r in &study.rows {
                let _ = writeln!(report, "{:e},{:.6e}", r.delta, r.gap);
            }
            match study.slope() {
                Some(s) => {
                    let _ = writeln!(report, "fitted slope: {s:.4}");
                }
                None => {
                    let _ = writeln!(report, "fitted slope: n/a");
                }
            }
            let _ = writeln!(report, "gaps decreasing: {}", study.gaps_decreasing());
            ExecStatus::Ok
        }
        ScenarioKind::RotationSweep { omegas, threshold } => {
            let grid = spec.solver.grid()?;
            let table = rotation_sweep_with(&spec.initial_data()?, omegas, &spec.solver, *threshold, || {
                DiagnosticsSeries::for_grid(&grid)
            })?;
            for row in &table.rows {
                let sub = dir.join(format!("omega_{}", row.omega));
                fs::create_dir_all(&sub).map_err(|e| LabError::io(&sub, e))?;
                write(&sub.join(DIAGNOSTICS_CSV), row.diagnostics.to_csv())?;
            }
            write(&dir.join(SWEEP_CSV), table.to_csv())?;
            let _ = writeln!(report, "threshold: {threshold}");
            let _ = writeln!(report, "omega,t_hit,crossed,U_end,status");
            for r in &table.rows {
                let _ = writeln!(
                    report,
                    "{},{:.4},{},{:.6},{}",
                    r.omega,
                    r.t_hit,
                    r.crossed,
                    r.u_end,
                    r.status.label()
                );
            }
            let flagged: Vec<String> = table
                .rows
                .iter()
                .filter(|r| r.flagged())
                .map(|r| r.omega.to_string())
                .collect();
            if flagged.is_empty() {
                ExecStatus::Ok
            } else {
                let msg = format!("runs stopped early at omega = {}", flagged.join(", "));
                let _ = writeln!(report, "FLAGGED: {msg}");
                ExecStatus::Aborted(msg)
            }
        }
        ScenarioKind::Strichartz { omegas, r, shell, t_end, center } => {
            let partition = DyadicPartition::new(&spec.solver.grid()?)?;
            let f = focused_packet(&partition, *shell, *center)?;
            let decay = strichartz_decay(&f, omegas, *r, *shell, *t_end)?;
            write(&dir.join(DECAY_CSV), decay.to_csv())?;
            let _ = writeln!(report, "r: {r}");
            let _ = writeln!(report, "shell: {shell}");
            let _ = writeln!(report, "fitted slope: {:.4}", decay.slope);
            let _ = writeln!(report, "predicted slope: {:.4}", -1.0 / r);
            let _ = writeln!(
                report,
                "tail sensitivity: {:.4} ({})",
                decay.tail_sensitivity(),
                if decay.tail_ok() { "ok" } else { "exceeds tolerance" }
            );
            ExecStatus::Ok
        }
        ScenarioKind::VerifyLemmas { ensemble, low_regularity_commutator } => {
            let suite = LemmaSuite {
                n: spec.solver.n,
                ensemble_size: *ensemble,
                seed: spec.seed,
                low_regularity_commutator: *low_regularity_commutator,
            };
            let reports = suite.run()?;
            write(&dir.join(LEMMAS_CSV), reports_to_csv(&reports))?;
            let _ = writeln!(report, "{:<34} {:>8} {:>12} {:>12}", "inequality", "samples", "max-ratio", "median");
            for r in &reports {
                let _ = writeln!(
                    report,
                    "{:<34} {:>8} {:>12.4e} {:>12.4e}",
                    r.lemma_id, r.sample_count, r.max_ratio, r.median
                );
            }
            if reports.iter().all(|r| r.is_finite()) {
                let _ = writeln!(report, "all constants finite");
                ExecStatus::Ok
            } else {
                let _ = writeln!(report, "FLAGGED: non-finite constant");
                ExecStatus::Aborted("non-finite empirical constant".into())
            }
        }
    };
    write(&dir.join(REPORT_TXT), &report)?;
    Ok(Execution { dir, status, report })
}

fn single_run(spec: &ScenarioSpec, dir: &Path, report: &mut String) -> Result<ExecStatus> {
    let grid = spec.solver.grid()?;
    let out = run_with(&spec.solver, &spec.initial_data()?, DiagnosticsSeries::for_grid(&grid))?;
    write(&dir.join(DIAGNOSTICS_CSV), out.diagnostics.to_csv())?;
    write(&dir.join(BESOV_CSV), out.diagnostics.besov_csv())?;
    let snaps = dir.join(SNAPSHOT_DIR);
    fs::create_dir_all(&snaps).map_err(|e| LabError::io(&snaps, e))?;
    for (i, (t, state)) in out.trajectory.times.iter().zip(&out.trajectory.states).enumerate() {
        Snapshot::from_vector(*t, state).write(&snaps.join(format!("snapshot_{i:05}.bin")))?;
    }

    let d = &out.diagnostics;
    let _ = writeln!(report, "omega: {}", spec.solver.omega);
    let _ = writeln!(report, "delta: {}", spec.solver.delta);
    let _ = writeln!(report, "final time: {}", out.final_time);
    let _ = writeln!(report, "status: {}", out.status.label());
    let _ = writeln!(report, "energy drift: {:.3e}", d.energy_drift());
    let _ = writeln!(report, "U(T): {:.6}", d.last_bkm());
    let _ = writeln!(report, "max divergence residual: {:.3e}", out.trajectory.max_divergence());
    let _ = writeln!(report, "snapshots: {}", out.trajectory.states.len());
    Ok(if out.status.is_completed() {
        ExecStatus::Ok
    } else {
        let msg = out.status.label();
        let _ = writeln!(report, "FLAGGED: solver stopped early ({msg}); artifacts are partial");
        ExecStatus::Aborted(msg)
    })
}
