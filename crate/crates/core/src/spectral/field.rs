use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

use crate::error::{LabError, Result};
use crate::spectral::grid::Grid;

/// The three L^p exponents the laboratory can evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exponent {
    One,
    Two,
    Infinity,
}

impl Exponent {
    pub fn from_f64(p: f64) -> Result<Self> {
        match p {
            1.0 => Ok(Exponent::One),
            2.0 => Ok(Exponent::Two),
            f64::INFINITY => Ok(Exponent::Infinity),
            other => Err(LabError::UnsupportedExponent(other)),
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Exponent::One => 1.0,
            Exponent::Two => 2.0,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    /// Reciprocal `1/p`, used for Hölder split validation.
    pub fn reciprocal(self) -> f64 {
        match self {
            Exponent::One => 1.0,
            Exponent::Two => 0.5,
            Exponent::Infinity => 0.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Exponent::One => "1",
            Exponent::Two => "2",
            Exponent::Infinity => "inf",
        }
    }
}

/// Combine per-point magnitudes into an L^p norm with cell volume `dv`.
pub(crate) fn grid_lp(values: impl Iterator<Item = f64>, p: Exponent, dv: f64) -> f64 {
    match p {
        Exponent::One => values.map(f64::abs).sum::<f64>() * dv,
        Exponent::Two => (values.map(|v| v * v).sum::<f64>() * dv).sqrt(),
        Exponent::Infinity => values.fold(0.0, |m, v| m.max(v.abs())),
    }
}

/// Fourier-series coefficients of a real scalar field on a periodic [`Grid`].
///
/// The forward transform divides by `n^3`, so `f(x) = Σ_k c_k e^{i ξ_k · x}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralScalarField {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl SpectralScalarField {
    pub fn zeros(grid: &Grid) -> Self {
        Self {
            grid: grid.clone(),
            coeffs: vec![Complex64::default(); grid.len()],
        }
    }

    pub fn from_coeffs(grid: &Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(LabError::ShapeMismatch {
                expected: grid.len(),
                actual: coeffs.len(),
            });
        }
        Ok(Self {
            grid: grid.clone(),
            coeffs,
        })
    }

    /// Forward transform of real samples laid out row-major on the grid.
    pub fn to_spectral(grid: &Grid, values: &[f64]) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(LabError::ShapeMismatch {
                expected: grid.len(),
                actual: values.len(),
            });
        }
        let mut coeffs: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        grid.fft().forward(&mut coeffs);
        let scale = 1.0 / grid.len() as f64;
        coeffs.iter_mut().for_each(|c| *c *= scale);
        Ok(Self {
            grid: grid.clone(),
            coeffs,
        })
    }

    /// Samples a function of the physical coordinates and transforms it.
    pub fn from_fn(grid: &Grid, f: impl Fn(f64, f64, f64) -> f64) -> Self {
        let n = grid.n();
        let mut values = Vec::with_capacity(grid.len());
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    values.push(f(grid.coordinate(i), grid.coordinate(j), grid.coordinate(k)));
                }
            }
        }
        Self::to_spectral(grid, &values).expect("sample count matches grid")
    }

    /// Real field `a e^{iξ·x} + conj(a) e^{-iξ·x}` for integer wavevector `k`.
    pub fn mode(grid: &Grid, k: [i64; 3], amplitude: Complex64) -> Self {
        let mut f = Self::zeros(grid);
        let idx = grid.mode_index(k);
        let conj = grid.conjugate_index(idx);
        if idx == conj {
            f.coeffs[idx] = Complex64::new(2.0 * amplitude.re, 0.0);
        } else {
            f.coeffs[idx] = amplitude;
            f.coeffs[conj] = amplitude.conj();
        }
        f
    }

    /// Inverse transform; returns the real part of the samples.
    pub fn to_physical(&self) -> Vec<f64> {
        self.to_physical_complex().into_iter().map(|c| c.re).collect()
    }

    /// Inverse transform keeping the imaginary part, for fields produced by
    /// non-Hermitian multipliers.
    pub fn to_physical_complex(&self) -> Vec<Complex64> {
        let mut data = self.coeffs.clone();
        self.grid.fft().inverse(&mut data);
        data
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient at integer wavevector `k`.
    pub fn at(&self, k: [i64; 3]) -> Complex64 {
        self.coeffs[self.grid.mode_index(k)]
    }

    /// Multiply every coefficient by `m(ξ)`. The closure is also evaluated at
    /// `ξ = 0`, so degree-0 symbols must supply their own value there.
    pub fn apply_multiplier(&self, m: impl Fn([f64; 3]) -> Complex64) -> Result<Self> {
        let mut out = self.clone();
        for (idx, c) in out.coeffs.iter_mut().enumerate() {
            let xi = self.grid.xi(idx);
            let v = m(xi);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(LabError::NonFiniteMultiplier { xi });
            }
            *c *= v;
        }
        Ok(out)
    }

    /// Real-symbol multiplier without finiteness checks, for internal operators.
    pub(crate) fn scaled_by(&self, m: impl Fn([f64; 3]) -> f64) -> Self {
        let mut out = self.clone();
        for (idx, c) in out.coeffs.iter_mut().enumerate() {
            *c *= m(self.grid.xi(idx));
        }
        out
    }

    /// Largest `|c(-k) - conj(c(k))|` relative to the largest coefficient.
    pub fn hermitian_defect(&self) -> f64 {
        let scale = self.max_abs_coeff();
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for idx in 0..self.coeffs.len() {
            if self.grid.touches_nyquist(idx) {
                continue;
            }
            let partner = self.coeffs[self.grid.conjugate_index(idx)];
            worst = worst.max((partner - self.coeffs[idx].conj()).norm());
        }
        worst / scale
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm_sqr())).sqrt()
    }

    /// Zero every coefficient on a Nyquist row.
    pub fn zero_nyquist(&mut self) {
        for idx in 0..self.coeffs.len() {
            if self.grid.touches_nyquist(idx) {
                self.coeffs[idx] = Complex64::default();
            }
        }
    }

    pub fn zero_mean(&mut self) {
        self.coeffs[0] = Complex64::default();
    }

    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    /// 2/3-rule truncation: zero coefficients with any `|k_axis| > n/3`.
    pub fn dealias(&self) -> Self {
        let mut out = self.clone();
        dealias_in_place(&self.grid, &mut out.coeffs);
        out
    }

    /// `‖f‖_{L^p}`. `p = 2` uses Parseval; `p = 1, ∞` use the collocation grid.
    pub fn lp_norm(&self, p: Exponent) -> f64 {
        match p {
            Exponent::Two => {
                let sum: f64 = self.coeffs.iter().map(|c| c.norm_sqr()).sum();
                (sum * self.grid.volume()).sqrt()
            }
            _ => grid_lp(
                self.to_physical_complex().iter().map(|c| c.norm()),
                p,
                self.grid.cell_volume(),
            ),
        }
    }

    /// Physical-grid L² norm by quadrature (independent of Parseval).
    pub fn lp_norm_quadrature(&self, p: Exponent) -> f64 {
        grid_lp(
            self.to_physical_complex().iter().map(|c| c.norm()),
            p,
            self.grid.cell_volume(),
        )
    }

    /// Real L² inner product `∫ f g dx`.
    pub fn inner(&self, other: &Self) -> f64 {
        let s: f64 = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a * b.conj()).re)
            .sum();
        s * self.grid.volume()
    }

    pub fn scale(&self, a: f64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= a);
        out
    }

    fn check_grid(&self, other: &Self) {
        assert!(self.grid == other.grid, "fields live on different grids");
    }
}

/// Inverse transforms of real-valued fields, two per complex FFT.
pub(crate) fn physical_many(fields: &[&SpectralScalarField]) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(fields.len());
    for chunk in fields.chunks(2) {
        match chunk {
            [a, b] => {
                let mut data: Vec<Complex64> = a
                    .coeffs
                    .iter()
                    .zip(&b.coeffs)
                    .map(|(x, y)| Complex64::new(x.re - y.im, x.im + y.re))
                    .collect();
                a.grid.fft().inverse(&mut data);
                out.push(data.iter().map(|c| c.re).collect());
                out.push(data.iter().map(|c| c.im).collect());
            }
            [a] => out.push(a.to_physical()),
            _ => unreachable!(),
        }
    }
    out
}

/// Forward transforms of real samples, two per complex FFT.
pub(crate) fn spectral_many(grid: &Grid, values: &[&[f64]]) -> Result<Vec<SpectralScalarField>> {
    if let Some(bad) = values.iter().find(|v| v.len() != grid.len()) {
        return Err(LabError::ShapeMismatch {
            expected: grid.len(),
            actual: bad.len(),
        });
    }
    let scale = 1.0 / grid.len() as f64;
    let mut out = Vec::with_capacity(values.len());
    for chunk in values.chunks(2) {
        match chunk {
            [f, g] => {
                let mut z: Vec<Complex64> = f.iter().zip(g.iter()).map(|(&x, &y)| Complex64::new(x, y)).collect();
                grid.fft().forward(&mut z);
                let mut a = vec![Complex64::default(); z.len()];
                let mut b = vec![Complex64::default(); z.len()];
                for idx in 0..z.len() {
                    let zc = z[grid.conjugate_index(idx)].conj();
                    a[idx] = (z[idx] + zc) * (0.5 * scale);
                    // (z - zc) / 2i
                    let d = (z[idx] - zc) * (0.5 * scale);
                    b[idx] = Complex64::new(d.im, -d.re);
                }
                out.push(SpectralScalarField { grid: grid.clone(), coeffs: a });
                out.push(SpectralScalarField { grid: grid.clone(), coeffs: b });
            }
            [f] => out.push(SpectralScalarField::to_spectral(grid, f)?),
            _ => unreachable!(),
        }
    }
    Ok(out)
}

pub(crate) fn dealias_in_place(grid: &Grid, coeffs: &mut [Complex64]) {
    let cutoff = grid.n() as f64 / 3.0;
    for (idx, c) in coeffs.iter_mut().enumerate() {
        let k = grid.mode(idx);
        if k.iter().any(|&ka| ka.abs() as f64 > cutoff) {
            *c = Complex64::default();
        }
    }
}

impl Add for &SpectralScalarField {
    type Output = SpectralScalarField;
    fn add(self, rhs: Self) -> SpectralScalarField {
        self.check_grid(rhs);
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &SpectralScalarField {
    type Output = SpectralScalarField;
    fn sub(self, rhs: Self) -> SpectralScalarField {
        self.check_grid(rhs);
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&SpectralScalarField> for SpectralScalarField {
    fn add_assign(&mut self, rhs: &SpectralScalarField) {
        self.check_grid(rhs);
        self.coeffs.iter_mut().zip(&rhs.coeffs).for_each(|(a, b)| *a += b);
    }
}

impl SubAssign<&SpectralScalarField> for SpectralScalarField {
    fn sub_assign(&mut self, rhs: &SpectralScalarField) {
        self.check_grid(rhs);
        self.coeffs.iter_mut().zip(&rhs.coeffs).for_each(|(a, b)| *a -= b);
    }
}

impl Mul<Complex64> for &SpectralScalarField {
    type Output = SpectralScalarField;
    fn mul(self, rhs: Complex64) -> SpectralScalarField {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= rhs);
        out
    }
}

/// A velocity-like field: three scalar components on one grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralVectorField {
    components: [SpectralScalarField; 3],
}

impl SpectralVectorField {
    pub fn new(components: [SpectralScalarField; 3]) -> Result<Self> {
        let g = components[0].grid();
        if components[1].grid() != g || components[2].grid() != g {
            return Err(LabError::GridMismatch);
        }
        Ok(Self { components })
    }

    pub fn zeros(grid: &Grid) -> Self {
        let z = SpectralScalarField::zeros(grid);
        Self {
            components: [z.clone(), z.clone(), z],
        }
    }

    pub fn from_physical(grid: &Grid, values: [&[f64]; 3]) -> Result<Self> {
        let [a, b, c]: [SpectralScalarField; 3] =
            spectral_many(grid, &values)?.try_into().expect("three components");
        Ok(Self { components: [a, b, c] })
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(f64, f64, f64) -> [f64; 3]) -> Self {
        let c0 = SpectralScalarField::from_fn(grid, |x, y, z| f(x, y, z)[0]);
        let c1 = SpectralScalarField::from_fn(grid, |x, y, z| f(x, y, z)[1]);
        let c2 = SpectralScalarField::from_fn(grid, |x, y, z| f(x, y, z)[2]);
        Self {
            components: [c0, c1, c2],
        }
    }

    /// Real vector field `a e^{iξ·x} + c.c.` for an integer wavevector `k`.
    pub fn mode(grid: &Grid, k: [i64; 3], amplitude: [Complex64; 3]) -> Self {
        Self {
            components: [
                SpectralScalarField::mode(grid, k, amplitude[0]),
                SpectralScalarField::mode(grid, k, amplitude[1]),
                SpectralScalarField::mode(grid, k, amplitude[2]),
            ],
        }
    }

    pub fn to_physical(&self) -> [Vec<f64>; 3] {
        let c = &self.components;
        physical_many(&[&c[0], &c[1], &c[2]]).try_into().expect("three components")
    }

    pub fn grid(&self) -> &Grid {
        self.components[0].grid()
    }

    pub fn component(&self, i: usize) -> &SpectralScalarField {
        &self.components[i]
    }

    pub fn components(&self) -> &[SpectralScalarField; 3] {
        &self.components
    }

    pub fn components_mut(&mut self) -> &mut [SpectralScalarField; 3] {
        &mut self.components
    }

    pub fn into_components(self) -> [SpectralScalarField; 3] {
        self.components
    }

    /// Coefficient triple at flat index `idx`.
    #[inline]
    pub fn coeff(&self, idx: usize) -> [Complex64; 3] {
        [
            self.components[0].coeffs[idx],
            self.components[1].coeffs[idx],
            self.components[2].coeffs[idx],
        ]
    }

    /// Apply a pointwise-in-ξ map to every coefficient triple.
    pub fn map_modes(
        &self,
        mut f: impl FnMut(usize, [f64; 3], [Complex64; 3]) -> [Complex64; 3],
    ) -> Self {
        let grid = self.grid().clone();
        let mut out = self.clone();
        for idx in 0..grid.len() {
            let v = f(idx, grid.xi(idx), self.coeff(idx));
            for (c, value) in out.components.iter_mut().zip(v) {
                c.coeffs[idx] = value;
            }
        }
        out
    }

    /// Same scalar multiplier on each component.
    pub fn apply_multiplier(&self, m: impl Fn([f64; 3]) -> Complex64) -> Result<Self> {
        Ok(Self {
            components: [
                self.components[0].apply_multiplier(&m)?,
                self.components[1].apply_multiplier(&m)?,
                self.components[2].apply_multiplier(&m)?,
            ],
        })
    }

    pub fn l2_norm(&self) -> f64 {
        self.lp_norm(Exponent::Two)
    }

    /// `‖|v|‖_{L^p}` with the pointwise Euclidean magnitude.
    pub fn lp_norm(&self, p: Exponent) -> f64 {
        match p {
            Exponent::Two => self
                .components
                .iter()
                .map(|c| c.lp_norm(Exponent::Two).powi(2))
                .sum::<f64>()
                .sqrt(),
            _ => {
                let phys: Vec<Vec<Complex64>> = self
                    .components
                    .iter()
                    .map(SpectralScalarField::to_physical_complex)
                    .collect();
                let mags = (0..self.grid().len()).map(|i| {
                    (phys[0][i].norm_sqr() + phys[1][i].norm_sqr() + phys[2][i].norm_sqr()).sqrt()
                });
                grid_lp(mags, p, self.grid().cell_volume())
            }
        }
    }

    /// Real L² inner product `∫ u · v dx`.
    pub fn inner(&self, other: &Self) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.inner(b))
            .sum()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.components
            .iter()
            .map(SpectralScalarField::max_abs_coeff)
            .fold(0.0, f64::max)
    }

    /// `max |ξ·û(ξ)| / max |û|`; zero for the zero field.
    pub fn divergence_residual(&self) -> f64 {
        let scale = self.max_abs_coeff();
        if scale == 0.0 {
            return 0.0;
        }
        let grid = self.grid();
        let mut worst = 0.0f64;
        for idx in 0..grid.len() {
            let xi = grid.xi(idx);
            let c = self.coeff(idx);
            let d = c[0] * xi[0] + c[1] * xi[1] + c[2] * xi[2];
            worst = worst.max(d.norm_sqr());
        }
        worst.sqrt() / scale
    }

    pub fn hermitian_defect(&self) -> f64 {
        self.components
            .iter()
            .map(SpectralScalarField::hermitian_defect)
            .fold(0.0, f64::max)
    }

    pub fn mean(&self) -> [f64; 3] {
        [
            self.components[0].mean(),
            self.components[1].mean(),
            self.components[2].mean(),
        ]
    }

    pub fn zero_mean(&mut self) {
        self.components.iter_mut().for_each(SpectralScalarField::zero_mean);
    }

    pub fn zero_nyquist(&mut self) {
        self.components.iter_mut().for_each(SpectralScalarField::zero_nyquist);
    }

    pub fn dealias(&self) -> Self {
        Self {
            components: [
                self.components[0].dealias(),
                self.components[1].dealias(),
                self.components[2].dealias(),
            ],
        }
    }

    pub fn scale(&self, a: f64) -> Self {
        let mut out = self.clone();
        out.scale_in_place(a);
        out
    }

    pub fn scale_in_place(&mut self, a: f64) {
        for comp in &mut self.components {
            comp.coeffs.iter_mut().for_each(|c| *c *= a);
        }
    }

    /// `self += a * other`.
    pub fn axpy(&mut self, a: f64, other: &Self) {
        for (s, o) in self.components.iter_mut().zip(&other.components) {
            s.check_grid(o);
            s.coeffs
                .iter_mut()
                .zip(&o.coeffs)
                .for_each(|(x, y)| *x += y * a);
        }
    }

    pub fn is_finite(&self) -> bool {
        self.components
            .iter()
            .all(|c| c.coeffs.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
    }
}

impl Add for &SpectralVectorField {
    type Output = SpectralVectorField;
    fn add(self, rhs: Self) -> SpectralVectorField {
        let mut out = self.clone();
        out.axpy(1.0, rhs);
        out
    }
}

impl Sub for &SpectralVectorField {
    type Output = SpectralVectorField;
    fn sub(self, rhs: Self) -> SpectralVectorField {
        let mut out = self.clone();
        out.axpy(-1.0, rhs);
        out
    }
}

impl Neg for &SpectralVectorField {
    type Output = SpectralVectorField;
    fn neg(self) -> SpectralVectorField {
        self.scale(-1.0)
    }
}

impl Mul<Complex64> for &SpectralVectorField {
    type Output = SpectralVectorField;
    fn mul(self, rhs: Complex64) -> SpectralVectorField {
        SpectralVectorField {
            components: [
                &self.components[0] * rhs,
                &self.components[1] * rhs,
                &self.components[2] * rhs,
            ],
        }
    }
}

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `∂_axis f` via the multiplier `iξ_axis`; Nyquist rows are dropped.
pub fn partial(f: &SpectralScalarField, axis: usize) -> SpectralScalarField {
    let grid = f.grid();
    let mut out = f.clone();
    for (idx, c) in out.coeffs.iter_mut().enumerate() {
        if grid.touches_nyquist(idx) {
            *c = Complex64::default();
        } else {
            *c *= I * grid.xi(idx)[axis];
        }
    }
    out
}

pub fn gradient(f: &SpectralScalarField) -> SpectralVectorField {
    SpectralVectorField {
        components: [partial(f, 0), partial(f, 1), partial(f, 2)],
    }
}

pub fn divergence(v: &SpectralVectorField) -> SpectralScalarField {
    let mut out = partial(v.component(0), 0);
    out += &partial(v.component(1), 1);
    out += &partial(v.component(2), 2);
    out
}

pub fn curl(v: &SpectralVectorField) -> SpectralVectorField {
    let grid = v.grid().clone();
    v.map_modes(|idx, xi, c| {
        if grid.touches_nyquist(idx) {
            return [Complex64::default(); 3];
        }
        [
            I * (c[2] * xi[1] - c[1] * xi[2]),
            I * (c[0] * xi[2] - c[2] * xi[0]),
            I * (c[1] * xi[0] - c[0] * xi[1]),
        ]
    })
}

/// Spectral Laplacian `-|ξ|^2 f`.
pub fn laplacian(f: &SpectralScalarField) -> SpectralScalarField {
    let grid = f.grid().clone();
    let mut out = f.scaled_by(|xi| -(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]));
    for idx in 0..grid.len() {
        if grid.touches_nyquist(idx) {
            out.coeffs[idx] = Complex64::default();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_scalar, random_vector};
    use std::f64::consts::PI;

    fn grid(n: usize) -> Grid {
        Grid::periodic(n).unwrap()
    }

    #[test]
    fn constant_field_is_dc_mode() {
        let g = grid(8);
        let f = SpectralScalarField::to_spectral(&g, &vec![1.0; g.len()]).unwrap();
        assert!((f.coeffs()[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(f.coeffs()[1..].iter().all(|c| c.norm() < 1e-15));
    }

    #[test]
    fn cosine_has_half_coefficients() {
        let g = grid(16);
        let f = SpectralScalarField::from_fn(&g, |x, _, _| (2.0 * PI * x / g.box_size()).cos());
        for idx in 0..g.len() {
            let k = g.mode(idx);
            let expected = if k == [1, 0, 0] || k == [-1, 0, 0] { 0.5 } else { 0.0 };
            assert!((f.coeffs()[idx] - Complex64::new(expected, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn round_trip_random_real_field() {
        let g = grid(16);
        let values: Vec<f64> = (0..g.len()).map(|i| ((i * 7919) % 1013) as f64 / 507.0 - 1.0).collect();
        let back = SpectralScalarField::to_spectral(&g, &values).unwrap().to_physical();
        let max = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let err = values.iter().zip(&back).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(err <= 1e-12 * max, "err {err}");
    }

    #[test]
    fn shape_mismatch_rejected() {
        let g = grid(8);
        assert!(matches!(
            SpectralScalarField::to_spectral(&g, &[0.0; 10]),
            Err(LabError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn multiplier_identity_and_derivative() {
        let g = grid(16);
        let l = g.box_size();
        let f = SpectralScalarField::from_fn(&g, |x, _, _| (2.0 * PI * x / l).cos());
        let same = f.apply_multiplier(|_| Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(same, f);
        let d = f.apply_multiplier(|xi| I * xi[0]).unwrap().to_physical();
        let n = g.n();
        for i in 0..n {
            let x = g.coordinate(i);
            let expected = -(2.0 * PI / l) * (2.0 * PI * x / l).sin();
            assert!((d[g.index(i, 3, 5)] - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn degree_zero_symbol_on_axis_mode() {
        let g = grid(8);
        let f = SpectralScalarField::mode(&g, [0, 0, 1], Complex64::new(0.3, 0.1));
        let r = f
            .apply_multiplier(|xi| {
                let norm = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
                if norm == 0.0 {
                    Complex64::default()
                } else {
                    Complex64::new(xi[2].abs() / norm, 0.0)
                }
            })
            .unwrap();
        assert_eq!(r, f);
    }

    #[test]
    fn non_finite_multiplier_reports_frequency() {
        let g = grid(8);
        let f = SpectralScalarField::mode(&g, [1, 0, 0], Complex64::new(1.0, 0.0));
        let err = f
            .apply_multiplier(|xi| Complex64::new(1.0 / xi[0], 0.0))
            .unwrap_err();
        match err {
            LabError::NonFiniteMultiplier { xi } => assert_eq!(xi[0], 0.0),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn vector_calculus_identities() {
        let g = grid(16);
        let v = random_vector(&g, 11, 5.0);
        let div_curl = divergence(&curl(&v));
        assert!(div_curl.max_abs_coeff() <= 1e-12 * v.max_abs_coeff().max(1.0));

        let f = random_scalar(&g, 3, 5.0);
        let lap = laplacian(&f);
        let dg = divergence(&gradient(&f));
        assert!((&dg - &lap).max_abs_coeff() <= 1e-12 * lap.max_abs_coeff());

        let c = SpectralScalarField::to_spectral(&g, &vec![2.5; g.len()]).unwrap();
        assert_eq!(gradient(&c).max_abs_coeff(), 0.0);

        // mixed partials commute
        let a = partial(&partial(&f, 0), 2);
        let b = partial(&partial(&f, 2), 0);
        assert!((&a - &b).max_abs_coeff() <= 1e-12 * a.max_abs_coeff());
    }

    #[test]
    fn dealias_cutoff() {
        let g = grid(32);
        let low = SpectralScalarField::mode(&g, [1, 0, 0], Complex64::new(1.0, 0.0));
        assert_eq!(low.dealias(), low);
        let high = SpectralScalarField::mode(&g, [12, 0, 0], Complex64::new(1.0, 0.0));
        assert_eq!(high.dealias().max_abs_coeff(), 0.0);
        let edge = SpectralScalarField::mode(&g, [10, -10, 10], Complex64::new(1.0, 0.0));
        assert_eq!(edge.dealias(), edge);
        let f = random_scalar(&g, 9, 16.0);
        assert_eq!(f.dealias().dealias(), f.dealias());
    }

    #[test]
    fn lp_norms_of_simple_fields() {
        let g = grid(16);
        let c = -1.5;
        let f = SpectralScalarField::to_spectral(&g, &vec![c; g.len()]).unwrap();
        assert!((f.lp_norm(Exponent::Infinity) - c.abs()).abs() < 1e-14);
        assert!((f.lp_norm(Exponent::Two) - c.abs() * (2.0 * PI).powf(1.5)).abs() < 1e-12);
        assert!((f.lp_norm(Exponent::One) - c.abs() * (2.0 * PI).powi(3)).abs() < 1e-10);

        let n = g.n();
        let s = SpectralScalarField::from_fn(&g, |x, _, _| x.sin());
        assert!((s.lp_norm(Exponent::Infinity) - 1.0).abs() <= 1.0 / (n * n) as f64);
        assert!(Exponent::from_f64(3.0).is_err());
    }

    #[test]
    fn parseval_matches_quadrature() {
        let g = grid(16);
        let f = random_scalar(&g, 21, 16.0);
        let spectral = f.lp_norm(Exponent::Two);
        let physical = f.lp_norm_quadrature(Exponent::Two);
        assert!((spectral - physical).abs() <= 1e-10 * spectral);
    }

    #[test]
    fn operations_preserve_hermitian_symmetry() {
        let g = grid(16);
        let v = random_vector(&g, 4, 6.0);
        assert!(v.hermitian_defect() < 1e-12);
        assert!(curl(&v).hermitian_defect() < 1e-12);
        assert!(gradient(v.component(0)).hermitian_defect() < 1e-12);
        assert!(v.dealias().hermitian_defect() < 1e-12);
    }
}
