use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{dealias, Fourier, Grid1D};
use super::propagate::{multiplier, LinearDispersion};
use super::state::WaveState;
use crate::akns::relativistic_nonlinearity_through;
use crate::algebra::{Assignment, DiffPoly, Field, Var};
use crate::error::{Error, Result};

/// Amplitude growth factor that aborts a run.
pub const BLOW_UP_FACTOR: f64 = 1e6;

/// A differential polynomial in `psi`, `psibar` with numeric coefficients,
/// evaluated pseudospectrally.
#[derive(Clone, Debug)]
pub struct CompiledNonlinearity {
    terms: Vec<(Complex64, Vec<(Field, u32, u32)>)>,
    max_order: u32,
}

impl CompiledNonlinearity {
    pub fn compile(f: &DiffPoly, values: &Assignment) -> Result<Self> {
        if !f.is_local() {
            return Err(Error::InvalidParameter("nonlinearity must be local".into()));
        }
        let mut terms = Vec::new();
        let mut max_order = 0;
        for (mono, c) in f.terms() {
            let coeff = c
                .try_eval(values)
                .ok_or_else(|| Error::InvalidParameter(format!("unassigned symbol in coefficient {c}")))?;
            if coeff == Complex64::new(0.0, 0.0) {
                continue;
            }
            let mut factors = Vec::new();
            for (j, &e) in &mono.jets {
                if !matches!(j.field, Field::Psi | Field::PsiBar) {
                    return Err(Error::InvalidParameter(format!("unexpected field {}", j.field.name())));
                }
                max_order = max_order.max(j.order);
                factors.push((j.field, j.order, e));
            }
            terms.push((coeff, factors));
        }
        Ok(Self { terms, max_order })
    }

    /// Relativistic NLS nonlinearity through `eps_order` at the given `m`, `kappa2`, `eps`.
    pub fn relativistic(eps_order: u32, m: f64, kappa2: f64, eps: f64) -> Result<Self> {
        let f = relativistic_nonlinearity_through(eps_order)?;
        let vals = Assignment::new().with(Var::M, m).with(Var::Kappa2, kappa2).with(Var::Eps, eps);
        Self::compile(&f, &vals)
    }

    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Pointwise values of the polynomial; derivatives are spectral.
    pub fn eval(&self, grid: &Grid1D, fourier: &Fourier, psi: &[Complex64]) -> Vec<Complex64> {
        let derivs = fourier.derivatives(grid, psi, self.max_order);
        let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
        for (c, factors) in &self.terms {
            for (i, o) in out.iter_mut().enumerate() {
                let mut v = *c;
                for &(field, order, e) in factors {
                    let z = derivs[order as usize][i];
                    let z = if field == Field::PsiBar { z.conj() } else { z };
                    v *= z.powu(e);
                }
                *o += v;
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitStepConfig {
    pub dt: f64,
    pub steps: usize,
    pub eps_order: u32,
    pub linear: LinearDispersion,
}

impl SplitStepConfig {
    pub fn new(dt: f64, steps: usize, eps_order: u32) -> Self {
        Self { dt, steps, eps_order, linear: LinearDispersion::SemirelExact }
    }
}

/// Strang splitting for `i psi_t = [m c^2 sqrt(1 - d^2/m^2 c^2) - m c^2] psi + F(psi)` with `hbar = 1`.
pub struct SplitStepper {
    grid: Grid1D,
    fourier: Fourier,
    half: Vec<Complex64>,
    nonlinear: CompiledNonlinearity,
    dt: f64,
}

impl SplitStepper {
    pub fn new(state: &WaveState, cfg: &SplitStepConfig) -> Result<Self> {
        let params = state.params;
        if (params.hbar - 1.0).abs() > 0.0 {
            return Err(Error::InvalidParameter("the nonlinear solver works in units with hbar = 1".into()));
        }
        if cfg.eps_order > 1 {
            return Err(Error::InvalidParameter(format!("eps_order must be 0 or 1, got {}", cfg.eps_order)));
        }
        if !(cfg.dt > 0.0 && cfg.dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {}", cfg.dt)));
        }
        let ks = state.grid.wavenumbers();
        let guard = cfg.dt * cfg.linear.max_rate(&ks, &params);
        if guard >= 1.0 {
            return Err(Error::StabilityGuard(guard));
        }
        let nonlinear = CompiledNonlinearity::relativistic(cfg.eps_order, params.m, params.kappa2, params.eps())?;
        Ok(Self {
            grid: state.grid,
            fourier: Fourier::new(state.grid.n),
            half: multiplier(state, 0.5 * cfg.dt, cfg.linear),
            nonlinear,
            dt: cfg.dt,
        })
    }

    fn linear_half(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let mut spec = self.fourier.forward(psi);
        for (z, w) in spec.iter_mut().zip(&self.half) {
            *z *= w;
        }
        self.fourier.inverse(&spec)
    }

    /// `-i F(psi)`, dealiased.
    fn rhs(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let f = self.nonlinear.eval(&self.grid, &self.fourier, psi);
        let mut spec = self.fourier.forward(&f.iter().map(|z| Complex64::new(z.im, -z.re)).collect::<Vec<_>>());
        dealias(&self.grid, &mut spec);
        self.fourier.inverse(&spec)
    }

    fn nonlinear_step(&self, psi: &[Complex64]) -> Vec<Complex64> {
        if self.nonlinear.is_empty() {
            return psi.to_vec();
        }
        let h = self.dt;
        let axpy = |a: &[Complex64], s: f64, b: &[Complex64]| -> Vec<Complex64> {
            a.iter().zip(b).map(|(x, y)| x + y * s).collect()
        };
        let k1 = self.rhs(psi);
        let k2 = self.rhs(&axpy(psi, 0.5 * h, &k1));
        let k3 = self.rhs(&axpy(psi, 0.5 * h, &k2));
        let k4 = self.rhs(&axpy(psi, h, &k3));
        (0..psi.len()).map(|i| psi[i] + (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (h / 6.0)).collect()
    }

    pub fn step(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let a = self.linear_half(psi);
        let b = self.nonlinear_step(&a);
        self.linear_half(&b)
    }
}

/// Runs `cfg.steps` Strang steps, calling `observe` after each one.
pub fn splitstep_evolve_with(
    state: &WaveState,
    cfg: &SplitStepConfig,
    mut observe: impl FnMut(usize, &WaveState),
) -> Result<WaveState> {
    let stepper = SplitStepper::new(state, cfg)?;
    let limit = BLOW_UP_FACTOR * state.max_amplitude().max(f64::MIN_POSITIVE);
    let mut current = state.clone();
    for s in 1..=cfg.steps {
        let next = stepper.step(&current.values);
        if next.iter().any(|z| !z.is_finite() || z.norm() > limit) {
            return Err(Error::BlowUp(s));
        }
        current = current.evolved(next, state.time + s as f64 * cfg.dt);
        observe(s, &current);
    }
    Ok(current)
}

pub fn splitstep_evolve(state: &WaveState, cfg: &SplitStepConfig) -> Result<WaveState> {
    splitstep_evolve_with(state, cfg, |_, _| {})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::ic::{soliton_exact, InitialCondition};
    use crate::spectral::propagate::linear_propagate;
    use crate::spectral::state::WaveParams;

    #[test]
    fn cubic_term_evaluates_pointwise() {
        let g = Grid1D::new(20.0, 64).unwrap();
        let f = CompiledNonlinearity::relativistic(0, 0.5, 1.0, 0.0).unwrap();
        let psi: Vec<Complex64> = g.points().iter().map(|x| Complex64::new(1.0 / x.cosh(), 0.3)).collect();
        let out = f.eval(&g, &Fourier::new(g.n), &psi);
        for (o, p) in out.iter().zip(&psi) {
            assert!((o - (-2.0 * p.norm_sqr() * p)).norm() < 1e-14);
        }
    }

    #[test]
    fn linear_limit_matches_propagator() {
        let g = Grid1D::new(40.0, 256).unwrap();
        let params = WaveParams { kappa2: 0.0, c: Some(10.0), ..Default::default() };
        let s = InitialCondition::Gaussian { sigma: 2.0, x0: 0.0, k0: 1.0 }.build(g, params).unwrap();
        let cfg = SplitStepConfig::new(1e-3, 1000, 1);
        let a = splitstep_evolve(&s, &cfg).unwrap();
        let b = linear_propagate(&s, 1.0, LinearDispersion::SemirelExact).unwrap();
        assert!(a.max_difference(&b) < 1e-12);
    }

    #[test]
    fn stability_guard_trips() {
        let g = Grid1D::new(10.0, 1024).unwrap();
        let s = InitialCondition::Soliton { eta: 1.0, x0: 0.0 }.build(g, WaveParams::default()).unwrap();
        assert!(matches!(splitstep_evolve(&s, &SplitStepConfig::new(0.1, 1, 0)), Err(Error::StabilityGuard(_))));
    }

    #[test]
    fn short_soliton_run() {
        let g = Grid1D::new(40.0, 256).unwrap();
        let params = WaveParams::default();
        let s = InitialCondition::Soliton { eta: 1.0, x0: 0.0 }.build(g, params).unwrap();
        let out = splitstep_evolve(&s, &SplitStepConfig::new(1e-3, 200, 0)).unwrap();
        let exact = soliton_exact(g, params, 1.0, 0.0, out.time).unwrap();
        assert!(out.max_difference(&exact) < 1e-6);
    }
}
