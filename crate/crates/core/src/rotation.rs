//! Leray projection, helical projections `P±`, the Coriolis term and the
//! linear propagators (inertial waves and heat).

use num_complex::Complex64;

use crate::error::{LabError, Result};
use crate::spectral::SpectralVectorField;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Default tolerance on `max|ξ·û| / max|û|` for inputs that must be solenoidal.
pub const DIVERGENCE_TOLERANCE: f64 = 1e-10;

#[inline]
pub(crate) fn unit(xi: [f64; 3]) -> Option<[f64; 3]> {
    let r = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
    (r > 0.0).then(|| [xi[0] / r, xi[1] / r, xi[2] / r])
}

#[inline]
pub(crate) fn cross(a: [f64; 3], c: [Complex64; 3]) -> [Complex64; 3] {
    [
        c[2] * a[1] - c[1] * a[2],
        c[0] * a[2] - c[2] * a[0],
        c[1] * a[0] - c[0] * a[1],
    ]
}

#[inline]
pub(crate) fn project_mode(e: [f64; 3], c: [Complex64; 3]) -> [Complex64; 3] {
    let d = c[0] * e[0] + c[1] * e[1] + c[2] * e[2];
    [c[0] - d * e[0], c[1] - d * e[1], c[2] - d * e[2]]
}

const ZERO: [Complex64; 3] = [Complex64::new(0.0, 0.0); 3];

/// Leray–Helmholtz projection `û ↦ (δ_jk − ξ_jξ_k/|ξ|²) û_k`.
///
/// The mean and the Nyquist rows are zeroed.
pub fn leray_project(v: &SpectralVectorField) -> SpectralVectorField {
    let mean = v.mean();
    if mean.iter().any(|m| *m != 0.0) {
        log::debug!("leray_project: zeroing mean {mean:?}");
    }
    let grid = v.grid().clone();
    v.map_modes(|idx, xi, c| match unit(xi) {
        Some(e) if !grid.touches_nyquist(idx) => project_mode(e, c),
        _ => ZERO,
    })
}

/// `(D/|D|) × v`, i.e. `ξ/|ξ| × v̂(ξ)`, zero at `ξ = 0` and on Nyquist rows.
pub fn unit_cross(v: &SpectralVectorField) -> SpectralVectorField {
    let grid = v.grid().clone();
    v.map_modes(|idx, xi, c| match unit(xi) {
        Some(e) if !grid.touches_nyquist(idx) => cross(e, c),
        _ => ZERO,
    })
}

/// The two helical components `P₊v` and `P₋v`.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveSplit {
    pub plus: SpectralVectorField,
    pub minus: SpectralVectorField,
}

impl WaveSplit {
    /// `P₊v + P₋v`, which equals `Pv`.
    pub fn sum(&self) -> SpectralVectorField {
        &self.plus + &self.minus
    }

    /// `P₊v − P₋v`.
    pub fn difference(&self) -> SpectralVectorField {
        &self.plus - &self.minus
    }
}

/// `P±v = ½(Pv ± i (D/|D|)×v)`.
pub fn wave_split(v: &SpectralVectorField) -> WaveSplit {
    let pv = leray_project(v);
    let j = &unit_cross(v) * I;
    WaveSplit {
        plus: (&pv + &j).scale(0.5),
        minus: (&pv - &j).scale(0.5),
    }
}

fn require_solenoidal(v: &SpectralVectorField) -> Result<()> {
    let residual = v.divergence_residual();
    if residual > DIVERGENCE_TOLERANCE {
        return Err(LabError::DivergenceViolation {
            residual,
            bound: DIVERGENCE_TOLERANCE,
        });
    }
    Ok(())
}

/// `e₃ × v` pointwise.
pub fn e3_cross(v: &SpectralVectorField) -> SpectralVectorField {
    v.map_modes(|_, _, c| [-c[1], c[0], Complex64::default()])
}

/// `P(e₃ × v)` computed directly: cross product, then Leray projection.
pub fn coriolis_rotation_term(v: &SpectralVectorField) -> Result<SpectralVectorField> {
    require_solenoidal(v)?;
    Ok(leray_project(&e3_cross(v)))
}

/// `−i (D₃/|D|)(P₊v − P₋v)`, the helical form of the Coriolis term.
pub fn coriolis_rotation_term_helical(v: &SpectralVectorField) -> Result<SpectralVectorField> {
    require_solenoidal(v)?;
    let split = wave_split(v);
    Ok(split.difference().map_modes(|_, xi, c| match unit(xi) {
        Some(e) => {
            let m = -I * e[2];
            [c[0] * m, c[1] * m, c[2] * m]
        }
        None => ZERO,
    }))
}

/// Relative L² gap between the two routes for `P(e₃ × v)`.
pub fn rotation_identity_residual(v: &SpectralVectorField) -> Result<f64> {
    let direct = coriolis_rotation_term(v)?;
    let helical = coriolis_rotation_term_helical(v)?;
    let scale = v.l2_norm();
    Ok(if scale == 0.0 {
        0.0
    } else {
        (&direct - &helical).l2_norm() / scale
    })
}

/// Exact inertial-wave flow `e^{+iΩt D₃/|D|}P₊v + e^{−iΩt D₃/|D|}P₋v`,
/// the solution operator of `∂_t u + PΩe₃×u = 0`.
pub fn coriolis_propagator(v: &SpectralVectorField, omega: f64, t: f64) -> SpectralVectorField {
    let split = wave_split(v);
    let phase = |sign: f64| {
        move |xi: [f64; 3]| match unit(xi) {
            Some(e) => Complex64::from_polar(1.0, sign * omega * t * e[2]),
            None => Complex64::default(),
        }
    };
    let plus = split.plus.apply_multiplier(phase(1.0)).expect("unit phases are finite");
    let minus = split.minus.apply_multiplier(phase(-1.0)).expect("unit phases are finite");
    &plus + &minus
}

/// Heat semigroup `e^{νtΔ}`: multiplier `e^{−νt|ξ|²}`.
pub fn heat_propagator(v: &SpectralVectorField, nu: f64, t: f64) -> Result<SpectralVectorField> {
    if !(nu >= 0.0 && t >= 0.0) {
        return Err(LabError::InvalidParameter(format!(
            "heat propagator needs nu >= 0 and t >= 0 (got nu = {nu}, t = {t})"
        )));
    }
    v.apply_multiplier(|xi| {
        Complex64::new((-nu * t * (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2])).exp(), 0.0)
    })
}

/// Per-mode cache of the combined linear flow `e^{δhΔ} ∘ e^{−hPΩe₃×}` for a
/// fixed step `h`. Applies to solenoidal fields.
#[derive(Clone, Debug)]
pub struct LinearFlow {
    unit: Vec<[f64; 3]>,
    // cos θ and sin θ, θ = Ωhξ̂₃, both scaled by e^{−δh|ξ|²}
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl LinearFlow {
    pub fn new(grid: &crate::spectral::Grid, omega: f64, delta: f64, h: f64) -> Self {
        let len = grid.len();
        let mut unit_v = vec![[0.0; 3]; len];
        let mut cos = vec![0.0; len];
        let mut sin = vec![0.0; len];
        for idx in 0..len {
            if grid.touches_nyquist(idx) {
                continue;
            }
            let xi = grid.xi(idx);
            if let Some(e) = unit(xi) {
                let theta = omega * h * e[2];
                let decay = (-delta * h * (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2])).exp();
                unit_v[idx] = e;
                cos[idx] = theta.cos() * decay;
                sin[idx] = theta.sin() * decay;
            }
        }
        Self {
            unit: unit_v,
            cos,
            sin,
        }
    }

    /// `e^{−δh|ξ|²}(cos θ v − sin θ ξ̂ × v)`.
    pub fn apply(&self, v: &SpectralVectorField) -> SpectralVectorField {
        v.map_modes(|idx, _, c| {
            let j = cross(self.unit[idx], c);
            let (cs, sn) = (self.cos[idx], self.sin[idx]);
            [c[0] * cs - j[0] * sn, c[1] * cs - j[1] * sn, c[2] * cs - j[2] * sn]
        })
    }
}
