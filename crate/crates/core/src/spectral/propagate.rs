use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::Fourier;
use super::state::{WaveParams, WaveState};
use crate::algebra::{DispersionSeries, Var, Assignment};
use crate::error::{Error, Result};

/// Linear part of the evolution in Fourier space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LinearDispersion {
    /// `p^2 / 2m`.
    Nonrelativistic,
    /// `m c^2 (sqrt(1 + p^2/m^2 c^2) - 1)`; reduces to `p^2/2m` when `c` is infinite.
    SemirelExact,
    /// Binomial series of the root truncated at the given eps-order.
    SemirelTruncated(u32),
}

impl LinearDispersion {
    /// `(E(hbar k) - E0) / hbar`.
    pub fn rate(&self, k: f64, params: &WaveParams) -> f64 {
        let p = params.hbar * k;
        let e = match (self, params.c) {
            (LinearDispersion::Nonrelativistic, _) | (_, None) => p * p / (2.0 * params.m),
            (LinearDispersion::SemirelExact, Some(c)) => {
                // Written without cancellation: m c^2 (s - 1) = p^2 / (m (1 + s)).
                let s = (1.0 + p * p / (params.m * params.m * c * c)).sqrt();
                p * p / (params.m * (1.0 + s))
            }
            (LinearDispersion::SemirelTruncated(order), Some(_)) => {
                let series = DispersionSeries::semirelativistic(*order, 2 * (order + 1));
                let vals = Assignment::new().with(Var::M, params.m).with(Var::Eps, params.eps());
                series.eval_shifted(p, &vals)
            }
        };
        e / params.hbar
    }

    /// `max_k |rate(k)|` over the grid.
    pub fn max_rate(&self, ks: &[f64], params: &WaveParams) -> f64 {
        ks.iter().map(|k| self.rate(*k, params).abs()).fold(0.0, f64::max)
    }
}

/// Fourier multiplier `exp(-i dt rate(k))`.
pub(crate) fn multiplier(state: &WaveState, dt: f64, dispersion: LinearDispersion) -> Vec<Complex64> {
    state
        .grid
        .wavenumbers()
        .iter()
        .map(|k| Complex64::from_polar(1.0, -dt * dispersion.rate(*k, &state.params)))
        .collect()
}

/// Exact linear evolution over `dt`.
pub fn linear_propagate(state: &WaveState, dt: f64, dispersion: LinearDispersion) -> Result<WaveState> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    let fourier = Fourier::new(state.grid.n);
    let mut spec = fourier.forward(&state.values);
    for (z, w) in spec.iter_mut().zip(multiplier(state, dt, dispersion)) {
        *z *= w;
    }
    Ok(state.evolved(fourier.inverse(&spec), state.time + dt))
}
