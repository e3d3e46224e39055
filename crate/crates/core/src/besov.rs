//! Discrete Littlewood–Paley calculus on the periodic grid.
//!
//! The dyadic bumps are built by telescoping a smooth cutoff `θ` that equals
//! one on `ρ ≤ 1/2` and vanishes for `ρ ≥ 1`:
//!
//! ```text
//! φ̂_j(ξ) = θ(2^{-j-1}|ξ|) − θ(2^{-j}|ξ|),     ψ̂(ξ) = θ(|ξ|/2)
//! ```
//!
//! so `supp φ̂_j ⊂ {2^{j-1} ≤ |ξ| ≤ 2^{j+1}}` and consecutive bumps sum to one.

use std::collections::BTreeMap;

use crate::error::{LabError, Result};
use crate::spectral::field::grid_lp;
use crate::spectral::{Exponent, Grid, SpectralScalarField, SpectralVectorField};

/// `exp(-1/x)` for `x > 0`, zero otherwise.
fn flat(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// Smooth cutoff: exactly 1 on `ρ ≤ 1/2`, exactly 0 on `ρ ≥ 1`.
pub fn cutoff(rho: f64) -> f64 {
    if rho <= 0.5 {
        return 1.0;
    }
    if rho >= 1.0 {
        return 0.0;
    }
    // s runs 0 → 1 across the transition, linear in log2 ρ
    let s = rho.log2() + 1.0;
    let a = flat(1.0 - s);
    a / (a + flat(s))
}

/// The bump family `φ̂_j` and low-pass `ψ̂` evaluated on every grid frequency.
#[derive(Clone, Debug)]
pub struct DyadicPartition {
    grid: Grid,
    j_min: i32,
    j_max: i32,
    bumps: Vec<Vec<f64>>,
    psi_hat: Vec<f64>,
}

impl DyadicPartition {
    /// Shells run from `j_min = ⌊log₂ min|ξ|⌋` to `j_max = ⌈log₂ max|ξ|⌉`.
    pub fn new(grid: &Grid) -> Result<Self> {
        if grid.n() < 16 {
            return Err(LabError::InvalidGrid(format!(
                "n = {} cannot host three dyadic shells (need n >= 16)",
                grid.n()
            )));
        }
        let j_min = grid.min_frequency().log2().floor() as i32;
        let j_max = grid.max_frequency().log2().ceil() as i32;
        let radii: Vec<f64> = (0..grid.len())
            .map(|idx| {
                let xi = grid.xi(idx);
                (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt()
            })
            .collect();
        let bumps = (j_min..=j_max)
            .map(|j| radii.iter().map(|&r| bump(j, r)).collect())
            .collect();
        let psi_hat = radii.iter().map(|&r| cutoff(r / 2.0)).collect();
        Ok(Self {
            grid: grid.clone(),
            j_min,
            j_max,
            bumps,
            psi_hat,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn j_min(&self) -> i32 {
        self.j_min
    }

    pub fn j_max(&self) -> i32 {
        self.j_max
    }

    pub fn shells(&self) -> impl Iterator<Item = i32> {
        self.j_min..=self.j_max
    }

    fn check(&self, j: i32) -> Result<()> {
        if j < self.j_min || j > self.j_max {
            return Err(LabError::ShellOutOfRange {
                j,
                min: self.j_min,
                max: self.j_max,
            });
        }
        Ok(())
    }

    /// `φ̂_j` on the grid, in flat-index order.
    pub fn bump(&self, j: i32) -> Result<&[f64]> {
        self.check(j)?;
        Ok(&self.bumps[(j - self.j_min) as usize])
    }

    pub fn psi_hat(&self) -> &[f64] {
        &self.psi_hat
    }

    /// `Ŝ_k = 1 − Σ_{j ≥ k+1} φ̂_j` on the grid.
    pub fn low_pass_symbol(&self, k: i32) -> Vec<f64> {
        let mut sym = vec![1.0; self.grid.len()];
        for j in (k + 1).max(self.j_min)..=self.j_max {
            for (s, b) in sym.iter_mut().zip(&self.bumps[(j - self.j_min) as usize]) {
                *s -= b;
            }
        }
        sym
    }

    /// Largest `|Σ_j φ̂_j − 1|` over nonzero grid frequencies.
    pub fn partition_residual(&self) -> f64 {
        (1..self.grid.len())
            .map(|idx| {
                let s: f64 = self.bumps.iter().map(|b| b[idx]).sum();
                (s - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Largest `|ψ̂ + Σ_{j≥1} φ̂_j − 1|` over all grid frequencies.
    pub fn inhomogeneous_residual(&self) -> f64 {
        (0..self.grid.len())
            .map(|idx| {
                let s: f64 = (1.max(self.j_min)..=self.j_max)
                    .map(|j| self.bumps[(j - self.j_min) as usize][idx])
                    .sum();
                (s + self.psi_hat[idx] - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }
}

fn bump(j: i32, r: f64) -> f64 {
    let s = 2f64.powi(-j);
    cutoff(0.5 * s * r) - cutoff(s * r)
}

fn apply_symbol(f: &SpectralScalarField, sym: &[f64]) -> SpectralScalarField {
    let mut out = f.clone();
    out.coeffs_mut().iter_mut().zip(sym).for_each(|(c, s)| *c *= s);
    out
}

/// `Δ_j f`.
pub fn lp_block(f: &SpectralScalarField, partition: &DyadicPartition, j: i32) -> Result<SpectralScalarField> {
    Ok(apply_symbol(f, partition.bump(j)?))
}

/// `S_k f`.
pub fn low_pass(f: &SpectralScalarField, partition: &DyadicPartition, k: i32) -> SpectralScalarField {
    apply_symbol(f, &partition.low_pass_symbol(k))
}

/// `ψ ∗ f = S_0 f`.
pub fn psi_part(f: &SpectralScalarField, partition: &DyadicPartition) -> SpectralScalarField {
    apply_symbol(f, partition.psi_hat())
}

pub fn lp_block_vector(
    v: &SpectralVectorField,
    partition: &DyadicPartition,
    j: i32,
) -> Result<SpectralVectorField> {
    let c = v.components();
    SpectralVectorField::new([
        lp_block(&c[0], partition, j)?,
        lp_block(&c[1], partition, j)?,
        lp_block(&c[2], partition, j)?,
    ])
}

/// `(s, p, q)` and the homogeneous flag.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesovIndex {
    pub s: f64,
    pub p: Exponent,
    pub q: Exponent,
    pub homogeneous: bool,
}

impl BesovIndex {
    pub fn inhomogeneous(s: f64, p: Exponent, q: Exponent) -> Self {
        Self { s, p, q, homogeneous: false }
    }

    pub fn homogeneous(s: f64, p: Exponent, q: Exponent) -> Self {
        Self { s, p, q, homogeneous: true }
    }

    pub fn label(&self) -> String {
        format!(
            "{}B^{}_{{{},{}}}",
            if self.homogeneous { "hom " } else { "" },
            self.s,
            self.p.label(),
            self.q.label()
        )
    }
}

/// l^q combination of a finite sequence.
pub fn lq_sum(terms: impl Iterator<Item = f64>, q: Exponent) -> f64 {
    match q {
        Exponent::One => terms.sum(),
        Exponent::Two => terms.map(|t| t * t).sum::<f64>().sqrt(),
        Exponent::Infinity => terms.fold(0.0, f64::max),
    }
}

/// Norms of the individual dyadic blocks of a field.
///
/// `p = 2` block norms come from Parseval (no transforms); `p = 1, ∞` need one
/// inverse transform per block and component.
#[derive(Clone, Debug)]
pub struct BlockNorms {
    /// `‖Δ_j f‖_{L^p}` for `j = j_min..=j_max`.
    pub blocks: BTreeMap<i32, f64>,
    /// `‖ψ ∗ f‖_{L^p}`.
    pub low: f64,
}

impl BlockNorms {
    pub fn scalar(f: &SpectralScalarField, partition: &DyadicPartition, p: Exponent) -> Self {
        Self::components(&[f], partition, p)
    }

    pub fn vector(v: &SpectralVectorField, partition: &DyadicPartition, p: Exponent) -> Self {
        let c = v.components();
        Self::components(&[&c[0], &c[1], &c[2]], partition, p)
    }

    fn components(parts: &[&SpectralScalarField], partition: &DyadicPartition, p: Exponent) -> Self {
        let norm_of = |sym: &[f64]| block_norm(parts, sym, p);
        let blocks = partition
            .shells()
            .map(|j| (j, norm_of(partition.bump(j).expect("shell in range"))))
            .collect();
        let low = norm_of(partition.psi_hat());
        Self { blocks, low }
    }

    pub fn besov(&self, idx: &BesovIndex) -> f64 {
        let weighted = |(j, v): (&i32, &f64)| 2f64.powf(idx.s * *j as f64) * v;
        if idx.homogeneous {
            lq_sum(self.blocks.iter().map(weighted), idx.q)
        } else {
            lq_sum(self.blocks.iter().filter(|(j, _)| **j >= 1).map(weighted), idx.q) + self.low
        }
    }
}

fn block_norm(parts: &[&SpectralScalarField], sym: &[f64], p: Exponent) -> f64 {
    let grid = parts[0].grid();
    match p {
        Exponent::Two => {
            let sum: f64 = parts
                .iter()
                .map(|f| {
                    f.coeffs()
                        .iter()
                        .zip(sym)
                        .map(|(c, s)| c.norm_sqr() * s * s)
                        .sum::<f64>()
                })
                .sum();
            (sum * grid.volume()).sqrt()
        }
        _ => {
            let phys: Vec<Vec<num_complex::Complex64>> = parts
                .iter()
                .map(|f| apply_symbol(f, sym).to_physical_complex())
                .collect();
            let mags = (0..grid.len()).map(|i| phys.iter().map(|c| c[i].norm_sqr()).sum::<f64>().sqrt());
            grid_lp(mags, p, grid.cell_volume())
        }
    }
}

/// `‖f‖_{B^s_{p,q}}` or `‖f‖_{Ḃ^s_{p,q}}` over the resolved shells.
pub fn besov_norm(f: &SpectralScalarField, partition: &DyadicPartition, idx: &BesovIndex) -> f64 {
    BlockNorms::scalar(f, partition, idx.p).besov(idx)
}

/// Besov norm of a vector field, with pointwise Euclidean magnitudes.
pub fn besov_norm_vector(v: &SpectralVectorField, partition: &DyadicPartition, idx: &BesovIndex) -> f64 {
    BlockNorms::vector(v, partition, idx.p).besov(idx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::random_scalar;
    use num_complex::Complex64;

    fn partition(n: usize) -> DyadicPartition {
        DyadicPartition::new(&Grid::periodic(n).unwrap()).unwrap()
    }

    #[test]
    fn cutoff_is_flat_outside_transition() {
        assert_eq!(cutoff(0.0), 1.0);
        assert_eq!(cutoff(0.5), 1.0);
        assert_eq!(cutoff(1.0), 0.0);
        assert_eq!(cutoff(7.0), 0.0);
        let mut prev = 1.0;
        for i in 1..100 {
            let v = cutoff(0.5 + 0.5 * i as f64 / 100.0);
            assert!(v <= prev && (0.0..=1.0).contains(&v));
            prev = v;
        }
    }

    #[test]
    fn shell_range_for_standard_box() {
        let p = partition(32);
        assert_eq!(p.j_min(), 0);
        // max |ξ| = 16√3 ≈ 27.7
        assert_eq!(p.j_max(), 5);
        assert!(DyadicPartition::new(&Grid::periodic(8).unwrap()).is_err());
    }

    #[test]
    fn partition_of_unity_and_bounds() {
        let p = partition(32);
        assert!(p.partition_residual() <= 1e-12);
        assert!(p.inhomogeneous_residual() <= 1e-12);
        assert_eq!(p.psi_hat()[0], 1.0);
        let g = p.grid().clone();
        for j in p.shells() {
            for (idx, &b) in p.bump(j).unwrap().iter().enumerate() {
                assert!((0.0..=1.0).contains(&b));
                if b != 0.0 {
                    let xi = g.xi(idx);
                    let r = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
                    assert!(r >= 2f64.powi(j - 1) && r <= 2f64.powi(j + 1));
                }
            }
        }
        assert!(matches!(p.bump(9), Err(LabError::ShellOutOfRange { .. })));
    }

    #[test]
    fn dyadic_radius_sits_in_one_bump() {
        let p = partition(32);
        let g = p.grid().clone();
        for (j, k) in [(1, [2, 0, 0]), (2, [0, 4, 0]), (3, [0, 0, 8])] {
            let idx = g.mode_index(k);
            let total = p.bump(j - 1).unwrap()[idx] + p.bump(j).unwrap()[idx] + p.bump(j + 1).unwrap()[idx];
            assert!((total - 1.0).abs() < 1e-15);
            assert_eq!(p.bump(j).unwrap()[idx], 1.0);
        }
    }

    #[test]
    fn block_identities() {
        let p = partition(32);
        let g = p.grid().clone();
        let f = SpectralScalarField::mode(&g, [0, 4, 0], Complex64::new(0.7, -0.2));
        assert_eq!(lp_block(&f, &p, 2).unwrap(), f);

        let r = random_scalar(&g, 42, 15.0);
        let mut sum = psi_part(&r, &p);
        for j in 1..=p.j_max() {
            sum += &lp_block(&r, &p, j).unwrap();
        }
        assert!((&sum - &r).lp_norm(Exponent::Two) <= 1e-10 * r.lp_norm(Exponent::Two));

        let far = lp_block(&lp_block(&r, &p, 1).unwrap(), &p, 3).unwrap();
        assert_eq!(far.max_abs_coeff(), 0.0);
        assert!(lp_block(&r, &p, -3).is_err());
    }

    #[test]
    fn low_pass_behaviour() {
        let p = partition(32);
        let g = p.grid().clone();
        let low = SpectralScalarField::mode(&g, [1, 1, 0], Complex64::new(1.0, 0.0));
        // |ξ| = √2 ≤ 2^{3-1}
        assert_eq!(low_pass(&low, &p, 3), low);
        let high = SpectralScalarField::mode(&g, [8, 0, 0], Complex64::new(1.0, 0.0));
        assert_eq!(low_pass(&high, &p, 2).max_abs_coeff(), 0.0);
        let r = random_scalar(&g, 1, 15.0);
        let top = low_pass(&r, &p, p.j_max());
        assert!((&top - &r).lp_norm(Exponent::Two) <= 1e-10 * r.lp_norm(Exponent::Two));
    }

    #[test]
    fn single_mode_besov_norm() {
        let p = partition(32);
        let g = p.grid().clone();
        let f = SpectralScalarField::mode(&g, [0, 0, 8], Complex64::new(0.4, 0.1));
        let idx = BesovIndex::homogeneous(1.5, Exponent::Two, Exponent::One);
        let expected = 2f64.powf(1.5 * 3.0) * f.lp_norm(Exponent::Two);
        assert!((besov_norm(&f, &p, &idx) - expected).abs() <= 1e-12 * expected);
        let zero = SpectralScalarField::zeros(&g);
        assert_eq!(besov_norm(&zero, &p, &idx), 0.0);
    }

    #[test]
    fn besov_monotonicity() {
        let p = partition(32);
        let g = p.grid().clone();
        let f = SpectralScalarField::mode(&g, [0, 8, 0], Complex64::new(1.0, 0.0));
        let mut prev = 0.0;
        for s in [0.0, 0.5, 1.0, 2.5, 3.5] {
            let v = besov_norm(&f, &p, &BesovIndex::inhomogeneous(s, Exponent::Two, Exponent::One));
            assert!(v >= prev);
            prev = v;
        }
        let r = random_scalar(&g, 2, 12.0);
        for pe in [Exponent::One, Exponent::Two, Exponent::Infinity] {
            let one = besov_norm(&r, &p, &BesovIndex::inhomogeneous(1.0, pe, Exponent::One));
            let inf = besov_norm(&r, &p, &BesovIndex::inhomogeneous(1.0, pe, Exponent::Infinity));
            assert!(one >= inf);
        }
    }

    #[test]
    fn vector_norm_reduces_to_scalar_on_one_component() {
        let p = partition(16);
        let g = p.grid().clone();
        let f = random_scalar(&g, 5, 7.0);
        let z = SpectralScalarField::zeros(&g);
        let v = SpectralVectorField::new([z.clone(), f.clone(), z]).unwrap();
        for pe in [Exponent::One, Exponent::Two, Exponent::Infinity] {
            let idx = BesovIndex::inhomogeneous(2.5, pe, Exponent::One);
            let a = besov_norm(&f, &p, &idx);
            let b = besov_norm_vector(&v, &p, &idx);
            assert!((a - b).abs() <= 1e-12 * a);
        }
    }
}
