use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::Grid1D;
use super::state::{WaveParams, WaveState};
use crate::error::{Error, Result};

/// Initial-condition factory.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum InitialCondition {
    /// `(eta / kappa) sech(eta (x - x0))`.
    Soliton { eta: f64, x0: f64 },
    /// Unit-norm Gaussian `(pi sigma^2)^(-1/4) exp(-(x - x0)^2 / 2 sigma^2 + i k0 x)`.
    Gaussian { sigma: f64, x0: f64, k0: f64 },
    /// `exp(2 pi i mode x / L)`.
    Plane { mode: i64 },
}

impl InitialCondition {
    pub fn sample(&self, grid: &Grid1D, params: &WaveParams) -> Result<Vec<Complex64>> {
        let xs = grid.points();
        Ok(match *self {
            InitialCondition::Soliton { eta, x0 } => {
                if params.kappa2 <= 0.0 {
                    return Err(Error::InvalidParameter("bright soliton needs kappa2 > 0".into()));
                }
                let amp = eta / params.kappa2.sqrt();
                xs.iter().map(|x| Complex64::new(amp / (eta * (x - x0)).cosh(), 0.0)).collect()
            }
            InitialCondition::Gaussian { sigma, x0, k0 } => {
                if sigma <= 0.0 {
                    return Err(Error::InvalidParameter("sigma must be positive".into()));
                }
                let a = (std::f64::consts::PI * sigma * sigma).powf(-0.25);
                xs.iter()
                    .map(|x| {
                        let d = x - x0;
                        Complex64::from_polar(a * (-d * d / (2.0 * sigma * sigma)).exp(), k0 * x)
                    })
                    .collect()
            }
            InitialCondition::Plane { mode } => {
                let k = 2.0 * std::f64::consts::PI * mode as f64 / grid.length;
                xs.iter().map(|x| Complex64::from_polar(1.0, k * x)).collect()
            }
        })
    }

    pub fn build(&self, grid: Grid1D, params: WaveParams) -> Result<WaveState> {
        WaveState::new(grid, self.sample(&grid, &params)?, 0.0, params)
    }
}

/// `(eta/kappa) sech(eta (x - x0)) exp(i eta^2 t / 2m)`, the bright soliton of
/// `i psi_t = (1/2m)(-psi_xx - 2 kappa^2 |psi|^2 psi)`.
pub fn soliton_exact(grid: Grid1D, params: WaveParams, eta: f64, x0: f64, t: f64) -> Result<WaveState> {
    let base = InitialCondition::Soliton { eta, x0 }.sample(&grid, &params)?;
    let phase = Complex64::from_polar(1.0, eta * eta * t / (2.0 * params.m));
    WaveState::new(grid, base.into_iter().map(|z| z * phase).collect(), t, params)
}

/// Free Gaussian packet solving `i hbar psi_t = -(hbar^2/2m) psi_xx` on the line,
/// sampled at time `t` (unnormalized, width `sigma` at `t = 0`, centred at 0).
pub fn free_gaussian(x: f64, t: f64, sigma: f64, hbar: f64, m: f64) -> Complex64 {
    let s = Complex64::new(1.0, hbar * t / (m * sigma * sigma));
    (-(x * x) / (2.0 * sigma * sigma) / s).exp() / s.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::Fourier;

    #[test]
    fn soliton_solves_cubic_nls() {
        // Residual of i psi_t = (1/2m)(-psi_xx - 2 kappa^2 |psi|^2 psi) with psi_t = i omega psi.
        let g = Grid1D::new(60.0, 512).unwrap();
        let params = WaveParams { m: 0.7, kappa2: 1.3, ..Default::default() };
        let eta = 1.2;
        let s = soliton_exact(g, params, eta, 0.5, 0.0).unwrap();
        let d2 = Fourier::new(g.n).derivative(&g, &s.values, 2);
        let omega = eta * eta / (2.0 * params.m);
        for (p, pxx) in s.values.iter().zip(&d2) {
            let lhs = -omega * p;
            let rhs = (-pxx - 2.0 * params.kappa2 * p.norm_sqr() * p) / (2.0 * params.m);
            assert!((lhs - rhs).norm() < 1e-10);
        }
    }

    #[test]
    fn free_gaussian_solves_schrodinger() {
        let (hbar, m, sigma) = (0.9, 1.4, 1.1);
        let (x, t, h) = (0.37, 0.8, 1e-4);
        let psi = |x, t| free_gaussian(x, t, sigma, hbar, m);
        let pt = (psi(x, t + h) - psi(x, t - h)) / (2.0 * h);
        let pxx = (psi(x + h, t) - 2.0 * psi(x, t) + psi(x - h, t)) / (h * h);
        let res = Complex64::new(0.0, hbar) * pt + hbar * hbar / (2.0 * m) * pxx;
        assert!(res.norm() < 1e-6);
    }
}
