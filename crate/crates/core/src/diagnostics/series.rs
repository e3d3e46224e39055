use std::fmt::Write as _;
use std::sync::Arc;

use crate::besov::{BesovIndex, BlockNorms, DyadicPartition};
use crate::error::{LabError, Result};
use crate::spectral::field::physical_many;
use crate::spectral::{partial, Exponent, SpectralVectorField};

/// A Besov norm followed over time, with its CSV column name.
#[derive(Clone, Debug, PartialEq)]
pub struct TrackedNorm {
    pub column: String,
    pub index: BesovIndex,
    pub values: Vec<f64>,
}

/// The four norms recorded by default and their CSV columns.
pub fn default_tracked() -> Vec<(String, BesovIndex)> {
    use Exponent::*;
    vec![
        ("besov_5_2".into(), BesovIndex::inhomogeneous(2.5, Two, One)),
        ("besov_7_2".into(), BesovIndex::inhomogeneous(3.5, Two, One)),
        ("hom_besov_5_2".into(), BesovIndex::homogeneous(2.5, Two, One)),
        ("besov_inf_1".into(), BesovIndex::inhomogeneous(1.0, Infinity, One)),
    ]
}

/// `max_{x, j, k} |∂_k u_j(x)|` on the collocation grid.
pub fn grad_sup(u: &SpectralVectorField) -> f64 {
    let parts: Vec<_> = (0..9).map(|i| partial(u.component(i / 3), i % 3)).collect();
    let refs: Vec<_> = parts.iter().collect();
    physical_many(&refs)
        .iter()
        .flatten()
        .fold(0.0, |acc, v| acc.max(v.abs()))
}

/// Time series of the run observables. `bkm` is the running trapezoid
/// integral `U(t) = ∫₀ᵗ ‖∇u‖_∞ dτ`.
#[derive(Clone, Debug)]
pub struct DiagnosticsSeries {
    pub times: Vec<f64>,
    pub energy: Vec<f64>,
    pub grad_sup: Vec<f64>,
    pub bkm: Vec<f64>,
    pub besov: Vec<TrackedNorm>,
    partition: Option<Arc<DyadicPartition>>,
}

impl DiagnosticsSeries {
    /// Series tracking `tracked` Besov norms. Without a partition (grids below
    /// 16 points) Besov columns are skipped.
    pub fn new(partition: Option<Arc<DyadicPartition>>, tracked: Vec<(String, BesovIndex)>) -> Self {
        let besov = if partition.is_some() {
            tracked
                .into_iter()
                .map(|(column, index)| TrackedNorm { column, index, values: Vec::new() })
                .collect()
        } else {
            Vec::new()
        };
        Self {
            times: Vec::new(),
            energy: Vec::new(),
            grad_sup: Vec::new(),
            bkm: Vec::new(),
            besov,
            partition,
        }
    }

    /// Default tracked set on the grid of `u`, if the grid can host a partition.
    pub fn for_grid(grid: &crate::spectral::Grid) -> Self {
        let partition = DyadicPartition::new(grid).ok().map(Arc::new);
        Self::new(partition, default_tracked())
    }

    /// Plain series without Besov tracking.
    pub fn untracked() -> Self {
        Self::new(None, Vec::new())
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last_bkm(&self) -> f64 {
        self.bkm.last().copied().unwrap_or(0.0)
    }

    /// Append a sample at time `t` and extend `U` by the trapezoid rule.
    pub fn bkm_update(&mut self, t: f64, u: &SpectralVectorField) -> Result<()> {
        let g = grad_sup(u);
        self.push_sample(t, u.l2_norm(), g)?;
        if let Some(partition) = self.partition.clone() {
            let mut cache: Vec<(Exponent, BlockNorms)> = Vec::new();
            for tracked in &mut self.besov {
                let p = tracked.index.p;
                if !cache.iter().any(|(q, _)| *q == p) {
                    cache.push((p, BlockNorms::vector(u, &partition, p)));
                }
                let blocks = &cache.iter().find(|(q, _)| *q == p).expect("cached").1;
                tracked.values.push(blocks.besov(&tracked.index));
            }
        }
        Ok(())
    }

    /// Append precomputed energy and gradient sup (no Besov values).
    pub fn push_sample(&mut self, t: f64, energy: f64, grad_sup: f64) -> Result<()> {
        let next_u = match self.times.last() {
            Some(&last) if t <= last => {
                return Err(LabError::InvalidParameter(format!(
                    "diagnostic times must increase strictly ({t} after {last})"
                )))
            }
            Some(&last) => {
                self.last_bkm() + 0.5 * (t - last) * (grad_sup + self.grad_sup.last().copied().unwrap_or(0.0))
            }
            None => 0.0,
        };
        self.times.push(t);
        self.energy.push(energy);
        self.grad_sup.push(grad_sup);
        self.bkm.push(next_u);
        Ok(())
    }

    pub fn tracked(&self, column: &str) -> Option<&TrackedNorm> {
        self.besov.iter().find(|t| t.column == column)
    }

    /// Relative energy drift `max_t |‖u(t)‖ − ‖u₀‖| / ‖u₀‖`.
    pub fn energy_drift(&self) -> f64 {
        let Some(&e0) = self.energy.first() else { return 0.0 };
        if e0 == 0.0 {
            return 0.0;
        }
        self.energy.iter().map(|e| (e - e0).abs() / e0).fold(0.0, f64::max)
    }

    /// CSV text: `t, energy, grad_sup, U` followed by the tracked norm columns.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,energy,grad_sup,U");
        for b in &self.besov {
            out.push(',');
            out.push_str(&b.column);
        }
        out.push('\n');
        for i in 0..self.times.len() {
            write!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e}",
                self.times[i], self.energy[i], self.grad_sup[i], self.bkm[i]
            )
            .expect("write to string");
            for b in &self.besov {
                write!(out, ",{:.16e}", b.values[i]).expect("write to string");
            }
            out.push('\n');
        }
        out
    }

    /// Besov series export: one row per sample and tracked norm.
    pub fn besov_csv(&self) -> String {
        let mut out = String::from("time,s,p,q,value\n");
        for i in 0..self.times.len() {
            for b in &self.besov {
                writeln!(
                    out,
                    "{:.16e},{},{},{},{:.16e}",
                    self.times[i],
                    b.index.s,
                    b.index.p.label(),
                    b.index.q.label(),
                    b.values[i]
                )
                .expect("write to string");
            }
        }
        out
    }
}

/// `c3 ‖u₀‖ exp(c4 U(t))` along the series.
pub fn gronwall_envelope(series: &DiagnosticsSeries, u0_norm: f64, c3: f64, c4: f64) -> Vec<f64> {
    series.bkm.iter().map(|u| c3 * u0_norm * (c4 * u).exp()).collect()
}

/// Smallest constants for which `norm(t) ≤ c3 norm(0) exp(c4 U(t))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GronwallFit {
    pub c3: f64,
    pub c4: f64,
    /// `min_t (envelope − norm)`; nonnegative by construction up to rounding.
    pub min_residual: f64,
}

/// Fits `c3` at `t = 0` first, then the smallest `c4 ≥ 0`.
pub fn fit_gronwall(series: &DiagnosticsSeries, norm: &[f64]) -> Result<GronwallFit> {
    let (&n0, _) = norm
        .split_first()
        .ok_or_else(|| LabError::InvalidParameter("empty norm series".into()))?;
    if n0 <= 0.0 {
        return Err(LabError::InvalidParameter("initial norm must be positive".into()));
    }
    let c3 = 1.0;
    let mut c4 = 0.0f64;
    for (value, u) in norm.iter().zip(&series.bkm).skip(1) {
        if *u > 0.0 && *value > c3 * n0 {
            c4 = c4.max((value / (c3 * n0)).ln() / u);
        }
    }
    // guard the rounding in exp(ln(x)) so the envelope is never below the data
    c4 *= 1.0 + 1e-12;
    let envelope = gronwall_envelope(series, n0, c3, c4);
    let min_residual = envelope
        .iter()
        .zip(norm)
        .map(|(e, v)| e - v)
        .fold(f64::INFINITY, f64::min);
    Ok(GronwallFit { c3, c4, min_residual })
}
