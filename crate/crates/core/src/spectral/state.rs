use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::Grid1D;
use crate::error::{Error, Result};

/// Physical constants of a run; `c = None` is the non-relativistic limit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveParams {
    pub hbar: f64,
    pub m: f64,
    pub c: Option<f64>,
    pub kappa2: f64,
}

impl Default for WaveParams {
    fn default() -> Self {
        Self { hbar: 1.0, m: 0.5, c: None, kappa2: 1.0 }
    }
}

impl WaveParams {
    /// `eps = 1/c^2`, zero when `c` is infinite.
    pub fn eps(&self) -> f64 {
        self.c.map_or(0.0, |c| 1.0 / (c * c))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hbar > 0.0 && self.m > 0.0) {
            return Err(Error::InvalidParameter("hbar and m must be positive".into()));
        }
        if let Some(c) = self.c {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::InvalidParameter(format!("speed of light must be positive, got {c}")));
            }
        }
        if !self.kappa2.is_finite() {
            return Err(Error::InvalidParameter("kappa2 must be finite".into()));
        }
        Ok(())
    }
}

/// Field samples on a periodic grid.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveState {
    pub grid: Grid1D,
    pub values: Vec<Complex64>,
    pub time: f64,
    pub params: WaveParams,
    initial_norm: f64,
}

impl WaveState {
    pub fn new(grid: Grid1D, values: Vec<Complex64>, time: f64, params: WaveParams) -> Result<Self> {
        params.validate()?;
        if values.len() != grid.n {
            return Err(Error::InvalidParameter(format!("expected {} samples, got {}", grid.n, values.len())));
        }
        if values.iter().any(|z| !z.is_finite()) {
            return Err(Error::InvalidParameter("non-finite sample".into()));
        }
        let initial_norm = l2_norm_sqr(&grid, &values);
        Ok(Self { grid, values, time, params, initial_norm })
    }

    /// Same grid and bookkeeping with new samples.
    pub(crate) fn evolved(&self, values: Vec<Complex64>, time: f64) -> Self {
        Self { grid: self.grid, values, time, params: self.params, initial_norm: self.initial_norm }
    }

    /// `sum |psi|^2 dx` at construction.
    pub fn initial_norm(&self) -> f64 {
        self.initial_norm
    }

    pub fn norm(&self) -> f64 {
        l2_norm_sqr(&self.grid, &self.values)
    }

    pub fn max_amplitude(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest pointwise gap to another state on the same grid.
    pub fn max_difference(&self, other: &WaveState) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Largest pointwise gap after rotating `other` by the global phase that
    /// best aligns it with `self`.
    pub fn phase_aligned_difference(&self, other: &WaveState) -> f64 {
        let overlap: Complex64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b.conj()).sum();
        let rot = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { Complex64::new(1.0, 0.0) };
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b * rot).norm()).fold(0.0, f64::max)
    }

    /// Discrete L2 distance.
    pub fn l2_difference(&self, other: &WaveState) -> f64 {
        let s: f64 = self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm_sqr()).sum();
        (s * self.grid.dx()).sqrt()
    }
}

pub(crate) fn l2_norm_sqr(grid: &Grid1D, values: &[Complex64]) -> f64 {
    values.iter().map(|z| z.norm_sqr()).sum::<f64>() * grid.dx()
}
