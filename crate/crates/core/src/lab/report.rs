//! Post-hoc checks on a run directory.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{LabError, Result};
use crate::lab::config::{parse_config, ScenarioKind};
use crate::lab::execute::{CONFIG_COPY, DIAGNOSTICS_CSV, SNAPSHOT_DIR};
use crate::solver::Scheme;
use crate::spectral::Snapshot;

pub const ENERGY_DRIFT_BOUND: f64 = 1e-8;
pub const DIVERGENCE_BOUND: f64 = 1e-8;
/// Relative slack allowed when checking that viscous energy never grows.
const MONOTONE_SLACK: f64 = 1e-12;

/// Parsed `diagnostics.csv`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagnosticsTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl DiagnosticsTable {
    /// Row numbers in errors are file line numbers (the header is row 1).
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let Some((_, header)) = lines.next() else {
            return Err(LabError::NoSamples(source.to_string()));
        };
        let columns: Vec<String> = header.split(',').map(|c| c.trim().to_string()).collect();
        for required in ["t", "energy", "grad_sup", "U"] {
            if !columns.iter().any(|c| c == required) {
                return Err(LabError::Csv { row: 1, message: format!("header lacks column '{required}'") });
            }
        }
        let mut rows = Vec::new();
        for (i, line) in lines {
            let row = i + 1;
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != columns.len() {
                return Err(LabError::Csv {
                    row,
                    message: format!("expected {} fields, found {}", columns.len(), fields.len()),
                });
            }
            let values = fields
                .iter()
                .zip(&columns)
                .map(|(f, c)| match f.trim().parse::<f64>() {
                    Ok(v) if v.is_finite() => Ok(v),
                    _ => Err(LabError::Csv { row, message: format!("column '{c}': invalid value '{f}'") }),
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push(values);
        }
        if rows.is_empty() {
            return Err(LabError::NoSamples(source.to_string()));
        }
        let t = columns.iter().position(|c| c == "t").expect("checked above");
        if let Some(k) = rows.windows(2).position(|w| w[1][t] <= w[0][t]) {
            return Err(LabError::Csv { row: k + 3, message: "times are not increasing".into() });
        }
        Ok(Self { columns, rows })
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Skip,
}

impl Outcome {
    fn label(self) -> &'static str {
        match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Skip => "SKIP",
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub outcome: Outcome,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub text: String,
    pub checks: Vec<Check>,
}

impl RunReport {
    /// No check failed (skipped checks do not count against the run).
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.outcome != Outcome::Fail)
    }
}

/// Directories holding a `diagnostics.csv`: `dir` itself, or else its
/// immediate subdirectories (sweeps).
fn targets(dir: &Path) -> Result<Vec<PathBuf>> {
    if dir.join(DIAGNOSTICS_CSV).is_file() {
        return Ok(vec![dir.to_path_buf()]);
    }
    let mut subs: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| LabError::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.join(DIAGNOSTICS_CSV).is_file())
        .collect();
    if subs.is_empty() {
        return Err(LabError::InvalidParameter(format!("{} contains no {DIAGNOSTICS_CSV}", dir.display())));
    }
    subs.sort();
    Ok(subs)
}

/// Whether the runs in `dir` carry a regularizing viscosity, read from the
/// persisted config (inviscid when absent).
fn viscous(dir: &Path) -> Result<bool> {
    let path = dir.join(CONFIG_COPY);
    if !path.is_file() {
        return Ok(false);
    }
    let text = fs::read_to_string(&path).map_err(|e| LabError::io(&path, e))?;
    let spec = parse_config(&text)?;
    Ok(match spec.kind {
        ScenarioKind::RotationSweep { .. } => false,
        _ => spec.solver.delta > 0.0 || spec.solver.scheme == Scheme::Picard,
    })
}

fn max_snapshot_divergence(dir: &Path) -> Result<Option<(usize, f64)>> {
    let snaps = dir.join(SNAPSHOT_DIR);
    if !snaps.is_dir() {
        return Ok(None);
    }
    let mut files: Vec<PathBuf> = fs::read_dir(&snaps)
        .map_err(|e| LabError::io(&snaps, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "bin"))
        .collect();
    if files.is_empty() {
        return Ok(None);
    }
    files.sort();
    let mut worst = 0.0f64;
    for f in &files {
        let v = Snapshot::read(f)?.into_vector()?;
        worst = worst.max(v.divergence_residual());
    }
    Ok(Some((files.len(), worst)))
}

pub fn report(run_dir: &Path) -> Result<RunReport> {
    let viscous = viscous(run_dir)?;
    let mut text = String::new();
    let mut checks = Vec::new();
    let _ = writeln!(text, "run: {}", run_dir.display());
    let targets = targets(run_dir)?;
    let _ = writeln!(
        text,
        "{:<16} {:>8} {:>12} {:>14} {:>14} {:>12}",
        "series", "samples", "t_final", "energy(0)", "energy(T)", "U(T)"
    );
    let mut lines = Vec::new();
    for dir in &targets {
        let label = if dir == run_dir {
            ".".to_string()
        } else {
            dir.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned())
        };
        let path = dir.join(DIAGNOSTICS_CSV);
        let csv = fs::read_to_string(&path).map_err(|e| LabError::io(&path, e))?;
        let table = DiagnosticsTable::parse(&csv, &path.display().to_string())?;
        let t = table.column("t").expect("required column");
        let e = table.column("energy").expect("required column");
        let u = table.column("U").expect("required column");
        let (e0, e1) = (e[0], *e.last().expect("nonempty"));
        let _ = writeln!(
            text,
            "{:<16} {:>8} {:>12.6} {:>14.8e} {:>14.8e} {:>12.6}",
            label,
            t.len(),
            t.last().expect("nonempty"),
            e0,
            e1,
            u.last().expect("nonempty")
        );
        let prefix = if targets.len() > 1 { format!("[{label}] ") } else { String::new() };

        let check = if viscous {
            let rises = e.windows(2).filter(|w| w[1] > w[0] * (1.0 + MONOTONE_SLACK)).count();
            Check {
                name: format!("{prefix}energy nonincreasing"),
                outcome: Outcome::from_bool(rises == 0),
                detail: format!("{rises} increases"),
            }
        } else {
            let drift = if e0 == 0.0 { 0.0 } else { e.iter().map(|x| (x - e0).abs() / e0).fold(0.0, f64::max) };
            Check {
                name: format!("{prefix}energy drift ≤ 1e−8"),
                outcome: Outcome::from_bool(drift <= ENERGY_DRIFT_BOUND),
                detail: format!("drift {drift:.3e}"),
            }
        };
        lines.push(check.clone());
        checks.push(check);

        let check = match max_snapshot_divergence(dir)? {
            Some((count, worst)) => Check {
                name: format!("{prefix}divergence ≤ 1e−8"),
                outcome: Outcome::from_bool(worst <= DIVERGENCE_BOUND),
                detail: format!("max {worst:.3e} over {count} snapshots"),
            },
            None => Check {
                name: format!("{prefix}divergence ≤ 1e−8"),
                outcome: Outcome::Skip,
                detail: "no snapshots".into(),
            },
        };
        lines.push(check.clone());
        checks.push(check);
    }
    for c in &lines {
        let _ = writeln!(text, "{}: {} ({})", c.name, c.outcome.label(), c.detail);
    }
    Ok(RunReport { text, checks })
}
