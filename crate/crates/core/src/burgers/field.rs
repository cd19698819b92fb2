use num_complex::Complex64;
use serde::Serialize;

use super::jet::NumJet;
use crate::error::{Error, Result};
use crate::spectral::{Fourier, WaveState};

/// Relative amplitude below which the log-derivative is refused.
pub const MIN_RELATIVE_AMPLITUDE: f64 = 1e-8;

/// Complex velocity samples `V(x_i, t)` together with their x-derivatives.
#[derive(Clone, Debug, PartialEq)]
pub struct VelocityField {
    pub x: Vec<f64>,
    pub t: f64,
    /// `jets[i]` holds `V, V_x, ...` at `x[i]`.
    pub jets: Vec<NumJet>,
    pub hbar: f64,
    pub m: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VelocitySample {
    pub x: f64,
    pub re: f64,
    pub im: f64,
}

impl VelocityField {
    pub fn new(x: Vec<f64>, t: f64, jets: Vec<NumJet>, hbar: f64, m: f64) -> Result<Self> {
        if x.len() < 16 {
            return Err(Error::InvalidParameter(format!("need at least 16 samples, got {}", x.len())));
        }
        if x.len() != jets.len() {
            return Err(Error::InvalidParameter("sample and jet counts differ".into()));
        }
        if x.iter().any(|v| !v.is_finite()) || jets.iter().any(|j| j.0.iter().any(|z| !z.is_finite())) {
            return Err(Error::InvalidParameter("non-finite velocity samples".into()));
        }
        if !(hbar > 0.0 && m > 0.0) {
            return Err(Error::InvalidParameter("hbar and m must be positive".into()));
        }
        Ok(Self { x, t, jets, hbar, m })
    }

    /// Samples a closed-form jet `V(x)` at the given points.
    pub fn from_fn(x: Vec<f64>, t: f64, hbar: f64, m: f64, jet: impl Fn(f64) -> NumJet) -> Result<Self> {
        let jets = x.iter().map(|&xi| jet(xi)).collect();
        Self::new(x, t, jets, hbar, m)
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn values(&self) -> Vec<Complex64> {
        self.jets.iter().map(|j| j.value()).collect()
    }

    /// `k`-th x-derivative at every sample.
    pub fn derivative(&self, k: usize) -> Vec<Complex64> {
        self.jets.iter().map(|j| j.0[k]).collect()
    }

    pub fn jet_order(&self) -> usize {
        self.jets.iter().map(NumJet::order).min().unwrap_or(0)
    }

    /// `Re V`.
    pub fn classical(&self) -> Vec<f64> {
        self.jets.iter().map(|j| j.value().re).collect()
    }

    /// `Im V`.
    pub fn quantum(&self) -> Vec<f64> {
        self.jets.iter().map(|j| j.value().im).collect()
    }

    /// `rho_x / rho = -(m/hbar) Im V`.
    pub fn log_density_gradient(&self) -> Vec<f64> {
        self.quantum().iter().map(|q| -self.m / self.hbar * q).collect()
    }

    pub fn samples(&self) -> Vec<VelocitySample> {
        self.x.iter().zip(&self.jets).map(|(&x, j)| VelocitySample { x, re: j.value().re, im: j.value().im }).collect()
    }

    /// Keeps samples with `keep(x)`.
    pub fn restrict(&self, keep: impl Fn(f64) -> bool) -> Result<Self> {
        let (x, jets): (Vec<_>, Vec<_>) =
            self.x.iter().zip(&self.jets).filter(|(x, _)| keep(**x)).map(|(x, j)| (*x, j.clone())).unzip();
        Self::new(x, self.t, jets, self.hbar, self.m)
    }
}

/// `V = -i (hbar/m) psi_x / psi` on the grid points inside `window`, with
/// x-derivatives of `V` up to `order` obtained from spectral derivatives of `psi`.
pub fn cole_hopf(psi: &WaveState, window: Option<(f64, f64)>, order: usize) -> Result<VelocityField> {
    let grid = psi.grid;
    let (lo, hi) = window.unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
    let idx: Vec<usize> = (0..grid.n).filter(|&j| (lo..=hi).contains(&grid.x(j))).collect();
    let max = psi.max_amplitude();
    for &j in &idx {
        let a = psi.values[j].norm();
        if a <= MIN_RELATIVE_AMPLITUDE * max {
            return Err(Error::NearZeroAmplitude { x: grid.x(j), amp: a });
        }
    }
    let derivs = Fourier::new(grid.n).derivatives(&grid, &psi.values, order as u32 + 1);
    let factor = Complex64::new(0.0, -psi.params.hbar / psi.params.m);
    let jets = idx
        .iter()
        .map(|&j| {
            let p = NumJet((0..=order).map(|k| derivs[k][j]).collect());
            let px = NumJet((1..=order + 1).map(|k| derivs[k][j]).collect());
            px.div(&p).map(|w| w.scale(factor))
        })
        .collect::<Result<Vec<_>>>()?;
    VelocityField::new(idx.iter().map(|&j| grid.x(j)).collect(), psi.time, jets, psi.params.hbar, psi.params.m)
}

/// `i hbar V_t + (hbar^2/2m) V_xx + i hbar V V_x` at the middle slice of an
/// equally spaced odd-length series (3 or 5 slices), with `V_t` from centred
/// differences and x-derivatives from the jets.
pub fn nbs_residual(series: &[VelocityField]) -> Result<Vec<Complex64>> {
    let weights: &[f64] = match series.len() {
        3 => &[-0.5, 0.0, 0.5],
        5 => &[1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0],
        n => return Err(Error::InvalidParameter(format!("need 3 or 5 time slices, got {n}"))),
    };
    let mid = &series[series.len() / 2];
    let dt = series[1].t - series[0].t;
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter("time slices must increase".into()));
    }
    for w in series.windows(2) {
        if ((w[1].t - w[0].t) - dt).abs() > 1e-9 * dt.max(1.0) || w[1].x != w[0].x {
            return Err(Error::InvalidParameter("time slices must share samples and spacing".into()));
        }
    }
    if mid.jet_order() < 2 {
        return Err(Error::InvalidParameter("residual needs jets of order 2".into()));
    }
    let (hbar, m) = (mid.hbar, mid.m);
    let i = Complex64::new(0.0, 1.0);
    Ok((0..mid.len())
        .map(|k| {
            let vt: Complex64 = series.iter().zip(weights).map(|(s, w)| s.jets[k].value() * *w).sum::<Complex64>() / dt;
            let j = &mid.jets[k].0;
            i * hbar * vt + hbar * hbar / (2.0 * m) * j[2] + i * hbar * j[0] * j[1]
        })
        .collect())
}

/// Largest modulus.
pub fn max_abs(values: &[Complex64]) -> f64 {
    values.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}
