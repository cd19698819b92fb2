use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::backlund::BacklundForm;
use super::field::{cole_hopf, max_abs, nbs_residual, VelocityField};
use super::jet::NumJet;
use crate::error::{Error, Result};
use crate::spectral::{free_gaussian, Grid1D, WaveParams, WaveState};

/// Known solutions of the velocity equation used as Bäcklund inputs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum BacklundSeed {
    Zero,
    /// `V = p/m`.
    Plane { p: f64 },
    /// Log-transform of a freely spreading Gaussian of initial width `sigma`.
    Gaussian { sigma: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClosureConfig {
    pub hbar: f64,
    pub m: f64,
    pub t: f64,
    /// Time step of the centred difference for `V_t`.
    pub dt: f64,
    pub length: f64,
    pub n: usize,
    pub window: (f64, f64),
    pub exclusion: f64,
}

impl Default for ClosureConfig {
    fn default() -> Self {
        Self { hbar: 1.0, m: 1.0, t: 0.5, dt: 1e-3, length: 60.0, n: 256, window: (-8.0, 8.0), exclusion: 0.5 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosureReport {
    pub seed: BacklundSeed,
    pub max_residual: f64,
    pub samples: usize,
    pub loci: Vec<(f64, f64)>,
    pub x: Vec<f64>,
    pub v2: Vec<Complex64>,
    pub residual: Vec<Complex64>,
}

impl BacklundSeed {
    /// Seed field at time `t` on the window points of the grid, with jets to `order`.
    pub fn field(&self, cfg: &ClosureConfig, t: f64, order: usize) -> Result<VelocityField> {
        let grid = Grid1D::new(cfg.length, cfg.n)?;
        let (lo, hi) = cfg.window;
        let xs: Vec<f64> = grid.points().into_iter().filter(|x| (lo..=hi).contains(x)).collect();
        match *self {
            BacklundSeed::Zero => {
                VelocityField::from_fn(xs, t, cfg.hbar, cfg.m, |_| NumJet::constant(Complex64::new(0.0, 0.0), order))
            }
            BacklundSeed::Plane { p } => VelocityField::from_fn(xs, t, cfg.hbar, cfg.m, |_| {
                NumJet::constant(Complex64::new(p / cfg.m, 0.0), order)
            }),
            BacklundSeed::Gaussian { sigma } => {
                let values = grid.points().iter().map(|&x| free_gaussian(x, t, sigma, cfg.hbar, cfg.m)).collect();
                let params = WaveParams { hbar: cfg.hbar, m: cfg.m, c: None, kappa2: 0.0 };
                cole_hopf(&WaveState::new(grid, values, t, params)?, Some(cfg.window), order)
            }
        }
    }
}

/// Applies the non-relativistic Bäcklund map to the seed on five time slices
/// and evaluates the Burgers-Schrodinger residual of the image at the middle one.
pub fn backlund_closure(seed: BacklundSeed, cfg: &ClosureConfig) -> Result<ClosureReport> {
    if !(cfg.dt > 0.0 && cfg.exclusion >= 0.0) {
        return Err(Error::InvalidParameter("dt must be positive and exclusion non-negative".into()));
    }
    let map = BacklundForm::nonrelativistic().compile(2, cfg.hbar, cfg.m, 0.0);
    let order = map.required_order();
    let mut loci = Vec::new();
    let mut slices = Vec::with_capacity(5);
    for k in -2i32..=2 {
        let t = cfg.t + k as f64 * cfg.dt;
        let v1 = seed.field(cfg, t, order)?;
        let img = map.apply_field(&v1, cfg.exclusion)?;
        if k == 0 {
            loci = img.loci.iter().map(|z| (z.re, z.im)).collect();
        }
        slices.push(img.field);
    }
    // Exclusion sets can differ between slices when a locus moves; keep the common samples.
    let common: Vec<f64> =
        slices[0].x.iter().copied().filter(|x| slices.iter().all(|s| s.x.contains(x))).collect();
    let slices = slices.iter().map(|s| s.restrict(|x| common.contains(&x))).collect::<Result<Vec<_>>>()?;
    let residual = nbs_residual(&slices)?;
    let mid = &slices[2];
    Ok(ClosureReport {
        seed,
        max_residual: max_abs(&residual),
        samples: mid.len(),
        loci,
        x: mid.x.clone(),
        v2: mid.values(),
        residual,
    })
}
