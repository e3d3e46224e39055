//! Initial data: helical (Beltrami) modes, Taylor–Green, seeded random spectra.

use num_complex::Complex64;

use crate::random::random_vector;
use crate::rotation::{leray_project, unit};
use crate::spectral::{Grid, SpectralVectorField};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Helicity {
    /// `curl h = +|ξ| h`, range of `P₊`.
    Plus,
    /// `curl h = −|ξ| h`, range of `P₋`.
    Minus,
}

impl Helicity {
    pub fn sign(self) -> f64 {
        match self {
            Helicity::Plus => 1.0,
            Helicity::Minus => -1.0,
        }
    }
}

/// Real unit vector orthogonal to `e`.
fn transverse(e: [f64; 3]) -> [f64; 3] {
    let a = if e[2].abs() < 0.9 { [0.0, 0.0, 1.0] } else { [1.0, 0.0, 0.0] };
    let c = [
        e[1] * a[2] - e[2] * a[1],
        e[2] * a[0] - e[0] * a[2],
        e[0] * a[1] - e[1] * a[0],
    ];
    let r = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
    [c[0] / r, c[1] / r, c[2] / r]
}

/// Helical basis vector `(e ± i ξ̂×e)/2` for wavevector `k`, with `e ⊥ ξ`.
pub fn helical_vector(grid: &Grid, k: [i64; 3], helicity: Helicity) -> [Complex64; 3] {
    let xi = grid.xi(grid.mode_index(k));
    let u = unit(xi).expect("helical vector needs k != 0");
    let e = transverse(u);
    let f = [
        u[1] * e[2] - u[2] * e[1],
        u[2] * e[0] - u[0] * e[2],
        u[0] * e[1] - u[1] * e[0],
    ];
    let s = helicity.sign();
    [
        Complex64::new(e[0], s * f[0]) * 0.5,
        Complex64::new(e[1], s * f[1]) * 0.5,
        Complex64::new(e[2], s * f[2]) * 0.5,
    ]
}

/// Single-wavevector Beltrami field with constant pointwise speed `amplitude`.
pub fn helical_mode(grid: &Grid, k: [i64; 3], helicity: Helicity, amplitude: f64) -> SpectralVectorField {
    let h = helical_vector(grid, k, helicity);
    SpectralVectorField::mode(grid, k, [h[0] * amplitude, h[1] * amplitude, h[2] * amplitude])
}

/// `A (sin x cos y cos z, −cos x sin y cos z, 0)` in units where the box is `2π`.
pub fn taylor_green(grid: &Grid, amplitude: f64) -> SpectralVectorField {
    let b = grid.base_frequency();
    let mut v = SpectralVectorField::from_fn(grid, |x, y, z| {
        let (x, y, z) = (b * x, b * y, b * z);
        [
            amplitude * x.sin() * y.cos() * z.cos(),
            -amplitude * x.cos() * y.sin() * z.cos(),
            0.0,
        ]
    });
    v.zero_nyquist();
    v
}

/// Random solenoidal field with energy spectrum `E(k) ∝ k⁴ exp(−2k²/k₀²)`,
/// dealiased and normalized to `‖u‖_{L²} = l2_norm`.
pub fn random_spectrum(grid: &Grid, k0: f64, l2_norm: f64, seed: u64) -> SpectralVectorField {
    let noise = random_vector(grid, seed, f64::INFINITY);
    let b = grid.base_frequency();
    let shaped = noise.map_modes(|_, xi, c| {
        let k = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt() / b;
        let a = k * (-(k * k) / (k0 * k0)).exp();
        [c[0] * a, c[1] * a, c[2] * a]
    });
    let v = leray_project(&shaped).dealias();
    let norm = v.l2_norm();
    if norm == 0.0 {
        v
    } else {
        v.scale(l2_norm / norm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{curl, Exponent};

    #[test]
    fn helical_modes_are_curl_eigenfields() {
        let g = Grid::periodic(16).unwrap();
        for k in [[1, 1, 0], [1, 0, 1], [0, 0, 2], [2, -1, 3]] {
            for hel in [Helicity::Plus, Helicity::Minus] {
                let h = helical_mode(&g, k, hel, 1.0);
                let lambda = hel.sign() * ((k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64).sqrt();
                let err = (&curl(&h) - &h.scale(lambda)).l2_norm();
                assert!(err <= 1e-12 * h.l2_norm(), "k = {k:?}");
                assert!(h.divergence_residual() <= 1e-14);
                assert!((h.lp_norm(Exponent::Infinity) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn taylor_green_is_solenoidal_and_mean_free() {
        let g = Grid::periodic(16).unwrap();
        let v = taylor_green(&g, 1.0);
        assert!(v.divergence_residual() <= 1e-14);
        assert!(v.mean().iter().all(|m| m.abs() < 1e-15));
        // ‖u‖² = L³/4 for unit amplitude
        let expected = ((2.0 * std::f64::consts::PI).powi(3) / 4.0).sqrt();
        assert!((v.l2_norm() - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn random_spectrum_is_seeded_and_normalized() {
        let g = Grid::periodic(16).unwrap();
        let a = random_spectrum(&g, 3.0, 2.0, 7);
        let b = random_spectrum(&g, 3.0, 2.0, 7);
        let c = random_spectrum(&g, 3.0, 2.0, 8);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!((a.l2_norm() - 2.0).abs() < 1e-12);
        assert!(a.divergence_residual() <= 1e-10);
        assert!(a.hermitian_defect() <= 1e-12);
    }
}
