use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Periodic grid on `[-L/2, L/2)` with `n` points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub length: f64,
    pub n: usize,
}

impl Grid1D {
    pub fn new(length: f64, n: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidParameter(format!("grid length must be positive, got {length}")));
        }
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::InvalidParameter(format!("grid size must be a power of two >= 16, got {n}")));
        }
        Ok(Self { length, n })
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        -0.5 * self.length + j as f64 * self.dx()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    /// Wavenumbers `2 pi j / L` in FFT order, `j` in `[-n/2, n/2)`.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let n = self.n as i64;
        (0..n).map(|j| 2.0 * PI * (if j < n / 2 { j } else { j - n }) as f64 / self.length).collect()
    }

    pub fn k_max(&self) -> f64 {
        PI / self.dx()
    }
}

/// Planned forward/inverse transforms for one grid size.
#[derive(Clone)]
pub struct Fourier {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Fourier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Fourier").field("n", &self.n).finish()
    }
}

impl Fourier {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self { n, forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n) }
    }

    pub fn forward(&self, values: &[Complex64]) -> Vec<Complex64> {
        let mut buf = values.to_vec();
        self.forward.process(&mut buf);
        buf
    }

    /// Normalized inverse.
    pub fn inverse(&self, spectrum: &[Complex64]) -> Vec<Complex64> {
        let mut buf = spectrum.to_vec();
        self.inverse.process(&mut buf);
        let s = 1.0 / self.n as f64;
        for z in &mut buf {
            *z *= s;
        }
        buf
    }

    /// `d^order/dx^order` by Fourier multiplication; the Nyquist mode is
    /// dropped for odd orders.
    pub fn derivative(&self, grid: &Grid1D, values: &[Complex64], order: u32) -> Vec<Complex64> {
        if order == 0 {
            return values.to_vec();
        }
        let mut spec = self.forward(values);
        apply_derivative(grid, &mut spec, order);
        self.inverse(&spec)
    }

    /// All derivatives `0..=max_order`.
    pub fn derivatives(&self, grid: &Grid1D, values: &[Complex64], max_order: u32) -> Vec<Vec<Complex64>> {
        let spec = self.forward(values);
        (0..=max_order)
            .map(|k| {
                if k == 0 {
                    return values.to_vec();
                }
                let mut s = spec.clone();
                apply_derivative(grid, &mut s, k);
                self.inverse(&s)
            })
            .collect()
    }
}

fn apply_derivative(grid: &Grid1D, spec: &mut [Complex64], order: u32) {
    let ks = grid.wavenumbers();
    let nyq = grid.n / 2;
    for (j, (z, k)) in spec.iter_mut().zip(&ks).enumerate() {
        if j == nyq && order % 2 == 1 {
            *z = Complex64::new(0.0, 0.0);
        } else {
            *z *= Complex64::new(0.0, *k).powu(order);
        }
    }
}

/// Zeroes every mode with `|k| > (2/3) k_max`.
pub fn dealias(grid: &Grid1D, spec: &mut [Complex64]) {
    let cut = 2.0 / 3.0 * grid.k_max();
    for (z, k) in spec.iter_mut().zip(grid.wavenumbers()) {
        if k.abs() > cut {
            *z = Complex64::new(0.0, 0.0);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid1D::new(10.0, 100).is_err());
        assert!(Grid1D::new(-1.0, 64).is_err());
        assert!(Grid1D::new(10.0, 8).is_err());
    }

    #[test]
    fn wavenumber_layout() {
        let g = Grid1D::new(2.0 * PI, 16).unwrap();
        let k = g.wavenumbers();
        assert_eq!(k[1], 1.0);
        assert_eq!(k[8], -8.0);
        assert_eq!(k[15], -1.0);
    }

    #[test]
    fn spectral_derivative_of_gaussian() {
        let g = Grid1D::new(40.0, 256).unwrap();
        let f = Fourier::new(g.n);
        let v: Vec<Complex64> = g.points().iter().map(|x| Complex64::new((-x * x).exp(), 0.0)).collect();
        let d = f.derivatives(&g, &v, 2);
        for (j, x) in g.points().iter().enumerate() {
            let e = (-x * x).exp();
            assert!((d[1][j].re + 2.0 * x * e).abs() < 1e-12);
            assert!((d[2][j].re - (4.0 * x * x - 2.0) * e).abs() < 1e-11);
        }
    }

    #[test]
    fn roundtrip() {
        let f = Fourier::new(64);
        let v: Vec<Complex64> = (0..64).map(|j| Complex64::new(j as f64, -(j as f64) * 0.5)).collect();
        let back = f.inverse(&f.forward(&v));
        for (a, b) in v.iter().zip(&back) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
