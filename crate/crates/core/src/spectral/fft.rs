//! Cubic 3D complex FFT built from 1D rustfft plans.
//!
//! Strided axes are gathered into contiguous `n x n` planes so every 1D
//! transform runs on cache-resident rows.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub(crate) struct Fft3 {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Fft3 {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    /// Unnormalized forward transform, in place.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.run(&self.forward, data);
    }

    /// Unnormalized inverse transform, in place.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.run(&self.inverse, data);
    }

    fn run(&self, plan: &Arc<dyn Fft<f64>>, data: &mut [Complex64]) {
        let n = self.n;
        let plane = n * n;
        assert_eq!(data.len(), plane * n, "buffer does not match grid");
        let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];
        // last axis: rows are contiguous
        plan.process_with_scratch(data, &mut scratch);
        // middle axis: transpose each plane, transform its rows, transpose back
        for slab in data.chunks_exact_mut(plane) {
            transpose_square(slab, n);
            plan.process_with_scratch(slab, &mut scratch);
            transpose_square(slab, n);
        }
        // first axis: gather the (i, k) plane for each j
        let mut buf = vec![Complex64::default(); plane];
        for j in 0..n {
            for i in 0..n {
                let row = &data[i * plane + j * n..i * plane + j * n + n];
                for (k, v) in row.iter().enumerate() {
                    buf[k * n + i] = *v;
                }
            }
            plan.process_with_scratch(&mut buf, &mut scratch);
            for i in 0..n {
                let row = &mut data[i * plane + j * n..i * plane + j * n + n];
                for (k, v) in row.iter_mut().enumerate() {
                    *v = buf[k * n + i];
                }
            }
        }
    }
}

fn transpose_square(a: &mut [Complex64], n: usize) {
    for r in 0..n {
        for c in r + 1..n {
            a.swap(r * n + c, c * n + r);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn naive_dft(input: &[Complex64], n: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); n * n * n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let mut acc = Complex64::default();
                    for i in 0..n {
                        for j in 0..n {
                            for k in 0..n {
                                let phase = -2.0 * PI * ((a * i + b * j + c * k) as f64) / n as f64;
                                acc += input[(i * n + j) * n + k] * Complex64::from_polar(1.0, phase);
                            }
                        }
                    }
                    out[(a * n + b) * n + c] = acc;
                }
            }
        }
        out
    }

    #[test]
    fn matches_naive_dft() {
        let n = 4;
        let input: Vec<Complex64> = (0..n * n * n)
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 1.3).cos()))
            .collect();
        let expected = naive_dft(&input, n);
        let mut data = input.clone();
        Fft3::new(n).forward(&mut data);
        for (a, b) in data.iter().zip(&expected) {
            assert!((a - b).norm() < 1e-12);
        }
        Fft3::new(n).inverse(&mut data);
        for (a, b) in data.iter().zip(&input) {
            assert!((a / (n * n * n) as f64 - b).norm() < 1e-14);
        }
    }
}
