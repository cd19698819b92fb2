use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::{cole_hopf, max_abs, VelocityField};
use super::jet::{eval_on_jet, NumJet};
use super::madelung::general_madelung_residual;
use crate::algebra::{Assignment, DiffPoly, DispersionSeries, Var};
use crate::error::{Error, Result};
use crate::spectral::{linear_propagate, Grid1D, InitialCondition, LinearDispersion, WaveParams, WaveState};

/// Centred-difference weights for 3 or 5 equally spaced slices.
fn centred_weights(n: usize) -> Result<&'static [f64]> {
    match n {
        3 => Ok(&[-0.5, 0.0, 0.5]),
        5 => Ok(&[1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0]),
        n => Err(Error::InvalidParameter(format!("need 3 or 5 time slices, got {n}"))),
    }
}

/// A velocity-equation residual (a local differential polynomial in `V` and
/// `Vt`) evaluated at the middle slice, `V_t` from centred differences.
pub fn velocity_equation_residual(f: &DiffPoly, values: &Assignment, series: &[VelocityField]) -> Result<Vec<Complex64>> {
    let weights = centred_weights(series.len())?;
    let mid = &series[series.len() / 2];
    let dt = series[1].t - series[0].t;
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter("time slices must increase".into()));
    }
    if series.iter().any(|s| s.x != mid.x) {
        return Err(Error::InvalidParameter("time slices must share samples".into()));
    }
    let needed = f.jets().iter().map(|j| j.order as usize).max().unwrap_or(0);
    if mid.jet_order() < needed {
        return Err(Error::InvalidParameter(format!("residual needs jets of order {needed}, have {}", mid.jet_order())));
    }
    (0..mid.len())
        .map(|k| {
            let vt: Complex64 = series.iter().zip(weights).map(|(s, w)| s.jets[k].value() * *w).sum::<Complex64>() / dt;
            let vals = values.clone().with(Var::X, mid.x[k]);
            eval_on_jet(f, &vals, &mid.jets[k], Some(&NumJet(vec![vt])))
        })
        .collect()
}

/// A Gaussian packet propagated by the exact linear flow of a (possibly
/// truncated relativistic) dispersion, log-transformed and substituted into
/// the matching velocity equation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub sigma: f64,
    pub k0: f64,
    pub hbar: f64,
    pub m: f64,
    /// `None` is the non-relativistic limit.
    pub c: Option<f64>,
    pub eps_order: u32,
    pub t: f64,
    pub dt: f64,
    pub length: f64,
    pub n: usize,
    pub window: (f64, f64),
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            sigma: 2.0,
            k0: 0.5,
            hbar: 1.0,
            m: 1.0,
            c: None,
            eps_order: 1,
            t: 0.5,
            dt: 1e-3,
            length: 60.0,
            n: 256,
            window: (-5.0, 5.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineReport {
    pub max_residual: f64,
    pub x: Vec<f64>,
    pub v: Vec<Complex64>,
    pub residual: Vec<Complex64>,
}

pub fn gaussian_pipeline(cfg: &PipelineConfig) -> Result<PipelineReport> {
    if !(cfg.t > 2.0 * cfg.dt && cfg.dt > 0.0) {
        return Err(Error::InvalidParameter("need t > 2 dt > 0".into()));
    }
    let params = WaveParams { hbar: cfg.hbar, m: cfg.m, c: cfg.c, kappa2: 0.0 };
    let (linear, dispersion) = match cfg.c {
        None => (LinearDispersion::Nonrelativistic, DispersionSeries::nonrelativistic()),
        Some(_) => (
            LinearDispersion::SemirelTruncated(cfg.eps_order),
            DispersionSeries::semirelativistic(cfg.eps_order, 2 * (cfg.eps_order + 1)),
        ),
    };
    let residual_form = general_madelung_residual(&dispersion);
    let order = residual_form.max_order().unwrap_or(0) as usize;
    let grid = Grid1D::new(cfg.length, cfg.n)?;
    let s0 = InitialCondition::Gaussian { sigma: cfg.sigma, x0: 0.0, k0: cfg.k0 }.build(grid, params)?;
    let slices = (-2i32..=2)
        .map(|k| {
            let s: WaveState = linear_propagate(&s0, cfg.t + k as f64 * cfg.dt, linear)?;
            cole_hopf(&s, Some(cfg.window), order)
        })
        .collect::<Result<Vec<_>>>()?;
    let values = Assignment::new().with(Var::Hbar, cfg.hbar).with(Var::M, cfg.m).with(Var::Eps, params.eps());
    let residual = velocity_equation_residual(&residual_form, &values, &slices)?;
    let mid = &slices[2];
    Ok(PipelineReport { max_residual: max_abs(&residual), x: mid.x.clone(), v: mid.values(), residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::burgers::{nbs_form, nbs_residual};

    #[test]
    fn general_evaluator_agrees_with_nbs() {
        let cfg = PipelineConfig::default();
        let grid = Grid1D::new(cfg.length, cfg.n).unwrap();
        let params = WaveParams { hbar: 1.0, m: 1.0, c: None, kappa2: 0.0 };
        let s0 = InitialCondition::Gaussian { sigma: 2.0, x0: 0.0, k0: 0.3 }.build(grid, params).unwrap();
        let slices: Vec<_> = [0.499, 0.5, 0.501]
            .iter()
            .map(|&t| cole_hopf(&linear_propagate(&s0, t, LinearDispersion::Nonrelativistic).unwrap(), Some(cfg.window), 2).unwrap())
            .collect();
        let values = Assignment::new().with(Var::Hbar, 1.0).with(Var::M, 1.0);
        let a = velocity_equation_residual(&nbs_form(), &values, &slices).unwrap();
        let b = nbs_residual(&slices).unwrap();
        for (p, q) in a.iter().zip(&b) {
            assert!((p - q).norm() < 1e-12);
        }
    }

    #[test]
    fn nonrelativistic_pipeline() {
        let r = gaussian_pipeline(&PipelineConfig::default()).unwrap();
        assert!(r.max_residual < 1e-8, "{:e}", r.max_residual);
    }

    #[test]
    fn relativistic_pipeline() {
        let r = gaussian_pipeline(&PipelineConfig { c: Some(2.0), ..Default::default() }).unwrap();
        assert!(r.max_residual < 1e-8, "{:e}", r.max_residual);
    }

    #[test]
    fn mismatched_equation_leaves_a_residual() {
        // Relativistic data against the non-relativistic equation.
        let cfg = PipelineConfig { c: Some(2.0), ..Default::default() };
        let grid = Grid1D::new(cfg.length, cfg.n).unwrap();
        let params = WaveParams { hbar: 1.0, m: 1.0, c: cfg.c, kappa2: 0.0 };
        let s0 = InitialCondition::Gaussian { sigma: 2.0, x0: 0.0, k0: 0.5 }.build(grid, params).unwrap();
        let slices: Vec<_> = [0.499, 0.5, 0.501]
            .iter()
            .map(|&t| cole_hopf(&linear_propagate(&s0, t, LinearDispersion::SemirelTruncated(1)).unwrap(), Some(cfg.window), 2).unwrap())
            .collect();
        assert!(max_abs(&nbs_residual(&slices).unwrap()) > 1e-4);
    }
}
