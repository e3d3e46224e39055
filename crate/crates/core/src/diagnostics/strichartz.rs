//! Space-time decay of the inertial-wave propagator on one dyadic shell:
//!
//! ```text
//! M(Ω) = ( ∫₀^{t_end} ‖Δ_j e^{iΩt ξ₃/|ξ|} f‖_∞^r dt )^{1/r}
//! ```
//!
//! For focused shell data `M(Ω)` should scale like `|Ω|^{-1/r}`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::besov::{lp_block, DyadicPartition};
use crate::error::{LabError, Result};
use crate::fit::loglog_fit;
use crate::spectral::{Grid, SpectralScalarField};

/// Phase samples per unit of rotated time `|Ω|t`.
pub const SAMPLES_PER_PHASE_UNIT: f64 = 8.0;
/// Allowed relative change of `M` when `t_end` is halved or doubled.
pub const TAIL_TOLERANCE: f64 = 0.05;

#[derive(Clone, Debug, PartialEq)]
pub struct DecayRow {
    pub omega: f64,
    /// `M(Ω)` over `[0, t_end]`.
    pub m: f64,
    pub m_half: f64,
    pub m_double: f64,
    pub log_fit_residual: f64,
}

impl DecayRow {
    /// Largest relative change of `M` under halving or doubling the window.
    pub fn tail_sensitivity(&self) -> f64 {
        ((self.m_half - self.m).abs()).max((self.m_double - self.m).abs()) / self.m
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecayReport {
    pub r: f64,
    pub shell: i32,
    pub t_end: f64,
    pub rows: Vec<DecayRow>,
    pub slope: f64,
    pub intercept: f64,
}

impl DecayReport {
    /// Worst tail sensitivity over all rotation rates.
    pub fn tail_sensitivity(&self) -> f64 {
        self.rows.iter().map(DecayRow::tail_sensitivity).fold(0.0, f64::max)
    }

    pub fn tail_ok(&self) -> bool {
        self.tail_sensitivity() < TAIL_TOLERANCE
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("omega,M,log_fit_residual\n");
        for r in &self.rows {
            s.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", r.omega, r.m, r.log_fit_residual));
        }
        s
    }
}

/// `Δ_j` applied to a unit point mass at `center`: the most focused data on a shell.
pub fn focused_packet(partition: &DyadicPartition, j: i32, center: [f64; 3]) -> Result<SpectralScalarField> {
    let grid = partition.grid();
    let bump = partition.bump(j)?;
    let coeffs = (0..grid.len())
        .map(|idx| {
            let xi = grid.xi(idx);
            let phase = -(xi[0] * center[0] + xi[1] * center[1] + xi[2] * center[2]);
            Complex64::from_polar(bump[idx], phase)
        })
        .collect();
    SpectralScalarField::from_coeffs(grid, coeffs)
}

/// Measure `M(Ω)` for every rate in `omegas` and fit `log M` against `log |Ω|`.
pub fn strichartz_decay(
    f: &SpectralScalarField,
    omegas: &[f64],
    r: f64,
    j: i32,
    t_end: f64,
) -> Result<DecayReport> {
    if omegas.len() < 4 {
        return Err(LabError::InvalidParameter(format!(
            "need at least 4 rotation rates, got {}",
            omegas.len()
        )));
    }
    if omegas.iter().any(|w| !(w.is_finite() && *w != 0.0)) {
        return Err(LabError::InvalidParameter("rotation rates must be finite and nonzero".into()));
    }
    let (lo, hi) = omegas
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), w| (lo.min(w.abs()), hi.max(w.abs())));
    if hi / lo < 100.0 {
        return Err(LabError::InvalidParameter(format!(
            "rotation rates span {:.2} decades, need at least 2",
            (hi / lo).log10()
        )));
    }
    if !(r > 2.0 && r.is_finite()) {
        return Err(LabError::UnsupportedExponent(r));
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(LabError::InvalidParameter(format!("t_end = {t_end} must be positive")));
    }
    let partition = DyadicPartition::new(f.grid())?;
    let block = lp_block(f, &partition, j)?;
    check_dispersive(&block)?;

    let measured = omegas
        .par_iter()
        .map(|&omega| windowed_norms(&block, omega, r, t_end))
        .collect::<Vec<_>>();
    let ms: Vec<f64> = measured.iter().map(|w| w[1]).collect();
    let abs: Vec<f64> = omegas.iter().map(|w| w.abs()).collect();
    let fit = loglog_fit(&abs, &ms)?;
    let rows = omegas
        .iter()
        .zip(&measured)
        .zip(&fit.residuals)
        .map(|((&omega, w), &res)| DecayRow {
            omega,
            m: w[1],
            m_half: w[0],
            m_double: w[2],
            log_fit_residual: res,
        })
        .collect();
    Ok(DecayReport { r, shell: j, t_end, rows, slope: fit.slope, intercept: fit.intercept })
}

/// Rejects data whose phase `ξ₃/|ξ|` is constant on its support (no dispersion).
fn check_dispersive(block: &SpectralScalarField) -> Result<()> {
    let grid = block.grid();
    let scale = block.max_abs_coeff();
    if scale == 0.0 {
        return Err(LabError::Degenerate("data has no content on the requested shell".into()));
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (idx, c) in block.coeffs().iter().enumerate() {
        if c.norm() > 1e-12 * scale {
            let xi = grid.xi(idx);
            let a = xi[2].abs() / (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
            lo = lo.min(a);
            hi = hi.max(a);
        }
    }
    if hi - lo <= 1e-12 {
        return Err(LabError::Degenerate(format!(
            "phase ξ₃/|ξ| is constant (|·| = {hi:.3}) on the data support; no dispersive decay"
        )));
    }
    Ok(())
}

/// `M` over `t_end/2`, `t_end` and `2 t_end`, from one trapezoid sweep.
fn windowed_norms(block: &SpectralScalarField, omega: f64, r: f64, t_end: f64) -> [f64; 3] {
    let grid: &Grid = block.grid();
    // samples over [0, t_end]; a multiple of 2 so the half window lands on a node
    let per_window = ((omega.abs() * t_end * SAMPLES_PER_PHASE_UNIT).ceil() as usize).max(64);
    let per_window = per_window + per_window % 2;
    let dt = t_end / per_window as f64;
    let rotor: Vec<Complex64> = (0..grid.len())
        .map(|idx| {
            let xi = grid.xi(idx);
            let mag = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
            let c = if mag > 0.0 { xi[2] / mag } else { 0.0 };
            Complex64::from_polar(1.0, omega * dt * c)
        })
        .collect();
    let mut state = block.coeffs().to_vec();
    let mut buffer = vec![Complex64::default(); state.len()];
    let sup = |state: &[Complex64], buffer: &mut Vec<Complex64>| {
        buffer.copy_from_slice(state);
        grid.fft().inverse(buffer);
        buffer.iter().fold(0.0f64, |m, c| m.max(c.norm_sqr())).sqrt()
    };
    let mut integral = 0.0;
    let mut prev = sup(&state, &mut buffer).powf(r);
    let mut out = [0.0; 3];
    for step in 1..=2 * per_window {
        state.iter_mut().zip(&rotor).for_each(|(c, z)| *c *= z);
        let cur = sup(&state, &mut buffer).powf(r);
        integral += 0.5 * dt * (prev + cur);
        prev = cur;
        if step == per_window / 2 {
            out[0] = integral.powf(1.0 / r);
        } else if step == per_window {
            out[1] = integral.powf(1.0 / r);
        }
    }
    out[2] = integral.powf(1.0 / r);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (DyadicPartition, SpectralScalarField) {
        let g = Grid::periodic(16).unwrap();
        let p = DyadicPartition::new(&g).unwrap();
        let f = focused_packet(&p, 2, [0.3, 1.1, 2.0]).unwrap();
        (p, f)
    }

    #[test]
    fn rejects_short_or_narrow_rate_lists() {
        let (_, f) = setup();
        assert!(strichartz_decay(&f, &[1.0, 10.0, 100.0], 4.0, 2, 1.0).is_err());
        assert!(strichartz_decay(&f, &[1.0, 2.0, 3.0, 4.0], 4.0, 2, 1.0).is_err());
        assert!(strichartz_decay(&f, &[1.0, 10.0, 30.0, 100.0], 2.0, 2, 1.0).is_err());
    }

    #[test]
    fn axis_data_is_degenerate() {
        let g = Grid::periodic(16).unwrap();
        let f = SpectralScalarField::mode(&g, [0, 0, 4], Complex64::new(1.0, 0.0));
        let err = strichartz_decay(&f, &[1.0, 10.0, 30.0, 100.0], 4.0, 2, 1.0).unwrap_err();
        assert!(matches!(err, LabError::Degenerate(_)));
    }

    #[test]
    fn linear_in_data_and_slope_scale_free() {
        let (_, f) = setup();
        let omegas = [1.0, 3.0, 10.0, 100.0];
        let a = strichartz_decay(&f, &omegas, 4.0, 2, 0.5).unwrap();
        let b = strichartz_decay(&f.scale(2.0), &omegas, 4.0, 2, 0.5).unwrap();
        for (x, y) in a.rows.iter().zip(&b.rows) {
            assert_eq!(y.m, 2.0 * x.m);
        }
        assert!((a.slope - b.slope).abs() < 1e-12);
        assert!(a.slope < 0.0);
    }

    #[test]
    fn csv_header() {
        let (_, f) = setup();
        let rep = strichartz_decay(&f, &[1.0, 3.0, 10.0, 100.0], 4.0, 2, 0.25).unwrap();
        let csv = rep.to_csv();
        assert!(csv.starts_with("omega,M,log_fit_residual\n"));
        assert_eq!(csv.lines().count(), 5);
    }
}
