use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{LabError, Result};
use crate::spectral::fft::Fft3;

/// A cubic periodic grid on the torus `[0, L)^3` with `n` points per axis.
///
/// Coefficient arrays are stored row-major in `(i, j, k)` order, each index
/// running over the standard FFT ordering `0, 1, .., n/2, -n/2+1, .., -1`.
/// Index `n/2` is the Nyquist row.
#[derive(Clone)]
pub struct Grid {
    n: usize,
    box_size: f64,
    shift: u32,
    wavenumbers: Arc<[i64]>,
    frequencies: Arc<[f64]>,
    fft: Arc<Fft3>,
}

impl Grid {
    pub fn new(n: usize, box_size: f64) -> Result<Self> {
        if n < 4 || !n.is_power_of_two() {
            return Err(LabError::InvalidGrid(format!(
                "n = {n} must be a power of two and at least 4"
            )));
        }
        if !(box_size.is_finite() && box_size > 0.0) {
            return Err(LabError::InvalidGrid(format!(
                "box size {box_size} must be positive"
            )));
        }
        let half = n as i64 / 2;
        let wavenumbers: Arc<[i64]> = (0..n as i64)
            .map(|i| if i <= half { i } else { i - n as i64 })
            .collect();
        let base = 2.0 * PI / box_size;
        let frequencies = wavenumbers.iter().map(|&k| k as f64 * base).collect();
        Ok(Self {
            n,
            box_size,
            shift: n.trailing_zeros(),
            wavenumbers,
            frequencies,
            fft: Arc::new(Fft3::new(n)),
        })
    }

    /// `n = 2^m` points on the standard `2π` box.
    pub fn periodic(n: usize) -> Result<Self> {
        Self::new(n, 2.0 * PI)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn box_size(&self) -> f64 {
        self.box_size
    }

    /// Total number of grid points `n^3`.
    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.box_size / self.n as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(3)
    }

    pub fn volume(&self) -> f64 {
        self.box_size.powi(3)
    }

    /// Integer wavenumbers along one axis in FFT order. The Nyquist entry is `+n/2`.
    pub fn wavenumbers(&self) -> &[i64] {
        &self.wavenumbers
    }

    /// `2π / L`, the physical frequency of wavenumber 1.
    pub fn base_frequency(&self) -> f64 {
        2.0 * PI / self.box_size
    }

    pub fn is_nyquist(&self, axis_index: usize) -> bool {
        axis_index == self.n / 2
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.n + k
    }

    #[inline]
    pub fn unravel(&self, idx: usize) -> (usize, usize, usize) {
        let mask = self.n - 1;
        (idx >> (2 * self.shift), (idx >> self.shift) & mask, idx & mask)
    }

    /// Flat index of the mode with integer wavevector `k` (components in `(-n/2, n/2]`).
    pub fn mode_index(&self, k: [i64; 3]) -> usize {
        let n = self.n as i64;
        let wrap = |c: i64| c.rem_euclid(n) as usize;
        self.index(wrap(k[0]), wrap(k[1]), wrap(k[2]))
    }

    /// Integer wavevector of a flat index.
    #[inline]
    pub fn mode(&self, idx: usize) -> [i64; 3] {
        let (i, j, k) = self.unravel(idx);
        [
            self.wavenumbers[i],
            self.wavenumbers[j],
            self.wavenumbers[k],
        ]
    }

    /// Physical frequency `ξ = 2π k / L` of a flat index.
    #[inline]
    pub fn xi(&self, idx: usize) -> [f64; 3] {
        let (i, j, k) = self.unravel(idx);
        let f = &self.frequencies;
        [f[i], f[j], f[k]]
    }

    /// True if any axis index of `idx` sits on the Nyquist row.
    #[inline]
    pub fn touches_nyquist(&self, idx: usize) -> bool {
        let (i, j, k) = self.unravel(idx);
        self.is_nyquist(i) || self.is_nyquist(j) || self.is_nyquist(k)
    }

    /// Flat index of `-k`.
    #[inline]
    pub fn conjugate_index(&self, idx: usize) -> usize {
        let n = self.n;
        let (i, j, k) = self.unravel(idx);
        self.index((n - i) % n, (n - j) % n, (n - k) % n)
    }

    /// Largest `|ξ|` present on the grid.
    pub fn max_frequency(&self) -> f64 {
        (self.n as f64 / 2.0) * 3f64.sqrt() * self.base_frequency()
    }

    /// Smallest nonzero `|ξ|`.
    pub fn min_frequency(&self) -> f64 {
        self.base_frequency()
    }

    /// Physical coordinate of grid point `i` along an axis.
    pub fn coordinate(&self, i: usize) -> f64 {
        i as f64 * self.spacing()
    }

    pub(crate) fn fft(&self) -> &Fft3 {
        &self.fft
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.box_size == other.box_size
    }
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("n", &self.n)
            .field("box_size", &self.box_size)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid::periodic(2).is_err());
        assert!(Grid::periodic(12).is_err());
        assert!(Grid::new(16, 0.0).is_err());
        assert!(Grid::periodic(4).is_ok());
    }

    #[test]
    fn fft_ordering_and_nyquist() {
        let g = Grid::periodic(8).unwrap();
        assert_eq!(g.wavenumbers(), &[0, 1, 2, 3, 4, -3, -2, -1]);
        assert!(g.is_nyquist(4));
        assert!(!g.is_nyquist(3));
        let idx = g.mode_index([1, -2, 3]);
        assert_eq!(g.mode(idx), [1, -2, 3]);
        assert_eq!(g.mode(g.conjugate_index(idx)), [-1, 2, -3]);
    }

    #[test]
    fn physical_frequencies_scale_with_box() {
        let g = Grid::new(8, 1.0).unwrap();
        let xi = g.xi(g.mode_index([1, 0, 0]));
        assert!((xi[0] - 2.0 * PI).abs() < 1e-15);
    }
}
