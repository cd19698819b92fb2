//! Point-vortex dynamics of E-polynomial zeros.
//!
//! With `psi = prod_l (x - x_l)`, the operator `Ẽ((hbar/i)(d/dx + sum_l 1/(x - x_l)))`
//! applied to 1 equals `Ẽ(P) psi / psi`. Its only poles are simple ones at the
//! vortex positions, with residue `(Ẽ(P) psi)(x_k) / prod_{l != k} (x_k - x_l)`.
//! The velocity `x_k' = (i/hbar) Res_k` is exactly the motion of the zeros of a
//! solution of `i hbar psi_t = Ẽ(P) psi`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::epoly_generate;
use super::ode::{dopri5, Tolerances};
use super::roots::{polynomial_roots, track_roots};
use crate::algebra::{Assignment, DispersionSeries, Var};
use crate::error::{Error, Result};

/// Minimum allowed separation between vortices.
pub const MIN_SEPARATION: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VortexParams {
    pub hbar: f64,
    pub m: f64,
    pub eps: f64,
}

impl Default for VortexParams {
    fn default() -> Self {
        Self { hbar: 1.0, m: 1.0, eps: 0.0 }
    }
}

impl VortexParams {
    pub fn assignment(&self) -> Assignment {
        Assignment::new().with(Var::Hbar, self.hbar).with(Var::M, self.m).with(Var::Eps, self.eps)
    }
}

#[derive(Clone, Debug)]
pub struct VortexConfig {
    pub positions: Vec<Complex64>,
    pub dispersion: DispersionSeries,
    pub params: VortexParams,
}

impl VortexConfig {
    pub fn validate(&self) -> Result<()> {
        check_separation(&self.positions)
    }
}

fn check_separation(xs: &[Complex64]) -> Result<()> {
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            if (xs[i] - xs[j]).norm() <= MIN_SEPARATION {
                return Err(Error::CoalescedVortices(i, j));
            }
        }
    }
    Ok(())
}

/// Ascending coefficients of `prod_l (x - x_l)`.
fn monic_from_roots(xs: &[Complex64]) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for r in xs {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (k, a) in c.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= a * r;
        }
        c = next;
    }
    c
}

fn derivative(c: &[Complex64]) -> Vec<Complex64> {
    c.iter().enumerate().skip(1).map(|(k, a)| a * k as f64).collect()
}

fn eval(c: &[Complex64], x: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * x + a)
}

fn velocities(xs: &[Complex64], dispersion: &DispersionSeries, params: &VortexParams) -> Vec<Complex64> {
    let psi = monic_from_roots(xs);
    let p_factor = Complex64::new(0.0, -params.hbar);
    let mut e_psi = vec![Complex64::new(0.0, 0.0); psi.len()];
    let mut power = psi.clone();
    let mut order = 0u32;
    for (n, c) in dispersion.numeric_coeffs(&params.assignment()) {
        while order < n {
            power = derivative(&power).into_iter().map(|a| a * p_factor).collect();
            order += 1;
        }
        for (k, a) in power.iter().enumerate() {
            e_psi[k] += a * c;
        }
    }
    let prefactor = Complex64::new(0.0, 1.0 / params.hbar);
    (0..xs.len())
        .map(|k| {
            let denom: Complex64 = (0..xs.len()).filter(|&l| l != k).map(|l| xs[k] - xs[l]).product();
            prefactor * eval(&e_psi, xs[k]) / denom
        })
        .collect()
}

/// Complex velocities of the vortices in `cfg`.
pub fn vortex_rhs(cfg: &VortexConfig) -> Result<Vec<Complex64>> {
    cfg.validate()?;
    Ok(velocities(&cfg.positions, &cfg.dispersion, &cfg.params))
}

/// Roots of `H_n` at each time, labeled continuously by nearest-neighbour matching.
pub fn zero_trajectories(
    dispersion: &DispersionSeries,
    n: u32,
    times: &[f64],
    params: &VortexParams,
) -> Result<Vec<Vec<Complex64>>> {
    assert!(n >= 1, "n must be at least 1");
    let h = epoly_generate(dispersion, n);
    let mut out: Vec<Vec<Complex64>> = Vec::with_capacity(times.len());
    for &t in times {
        let roots = polynomial_roots(&h.numeric_coeffs(t, params));
        let scale = roots.iter().map(|z| z.norm()).fold(1e-300, f64::max);
        let tol = 1e-4 * scale;
        let labeled = match out.last() {
            Some(prev) => track_roots(prev, &roots, t, tol)?,
            None => track_roots(&roots, &roots, t, tol)?,
        };
        out.push(labeled);
    }
    Ok(out)
}

/// Integrates the vortex equations from `cfg.positions` at `t0`.
pub fn integrate_vortices(cfg: &VortexConfig, t0: f64, t_out: &[f64], tol: Tolerances) -> Result<Vec<Vec<Complex64>>> {
    cfg.validate()?;
    dopri5(
        |_, y| {
            check_separation(y)?;
            Ok(velocities(y, &cfg.dispersion, &cfg.params))
        },
        t0,
        &cfg.positions,
        t_out,
        tol,
    )
}

/// Largest gap between a central-difference velocity of the tracked zeros of
/// `H_n` and the vortex velocity at the same positions, over `samples` times in `[t0, t1]`.
pub fn trajectory_velocity_mismatch(
    dispersion: &DispersionSeries,
    n: u32,
    params: &VortexParams,
    t0: f64,
    t1: f64,
    samples: usize,
) -> Result<f64> {
    let delta = 1e-4 * t0.abs().max(1e-3);
    let mut worst = 0.0_f64;
    for s in 0..samples {
        let t = t0 + (t1 - t0) * s as f64 / (samples.max(2) - 1) as f64;
        let traj = zero_trajectories(dispersion, n, &[t, t - delta, t + delta], params)?;
        let cfg = VortexConfig { positions: traj[0].clone(), dispersion: dispersion.clone(), params: *params };
        let v = vortex_rhs(&cfg)?;
        for k in 0..n as usize {
            let fd = (traj[2][k] - traj[1][k]) / (2.0 * delta);
            worst = worst.max((fd - v[k]).norm());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Literal operator expansion `f_{j+1} = f_j' + W f_j` on truncated Taylor
    /// series at `z`, followed by a trapezoid contour integral around `x_k`.
    fn residue_oracle(xs: &[Complex64], k: usize, coeffs: &[(u32, f64)], hbar: f64) -> Complex64 {
        let nmax = coeffs.iter().map(|(n, _)| *n).max().unwrap() as usize;
        let radius = 0.2;
        let samples = 256;
        let mut total = c(0.0, 0.0);
        for s in 0..samples {
            let theta = 2.0 * std::f64::consts::PI * s as f64 / samples as f64;
            let dz = Complex64::from_polar(radius, theta);
            let z = xs[k] + dz;
            // Taylor coefficients of W at z.
            let w: Vec<Complex64> = (0..=nmax)
                .map(|r| {
                    let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
                    xs.iter().map(|x| sign / (z - x).powu(r as u32 + 1)).sum()
                })
                .collect();
            let mut f = vec![c(0.0, 0.0); nmax + 1];
            f[0] = c(1.0, 0.0);
            let mut g = c(0.0, 0.0);
            let mut power = f.clone();
            let mut order = 0;
            let p = c(0.0, -hbar);
            for &(n, e) in coeffs {
                while order < n {
                    let len = power.len();
                    let mut next = vec![c(0.0, 0.0); len];
                    for r in 0..len - 1 {
                        next[r] = power[r + 1] * (r + 1) as f64;
                    }
                    for r in 0..len {
                        for q in 0..=r {
                            next[r] += w[q] * power[r - q];
                        }
                    }
                    power = next.into_iter().map(|a| a * p).collect();
                    order += 1;
                }
                g += power[0] * e;
            }
            total += g * dz;
        }
        total / (samples as f64) * c(0.0, 1.0 / hbar)
    }

    #[test]
    fn single_vortex_is_static() {
        for d in [DispersionSeries::nonrelativistic(), DispersionSeries::semirelativistic(2, 6)] {
            let cfg = VortexConfig { positions: vec![c(0.3, -0.2)], dispersion: d, params: VortexParams::default() };
            assert_eq!(vortex_rhs(&cfg).unwrap(), vec![c(0.0, 0.0)]);
        }
    }

    #[test]
    fn pair_velocity_closed_form() {
        let (a, b) = (c(0.4, 0.1), c(-0.7, 0.5));
        let params = VortexParams { hbar: 0.8, m: 1.7, eps: 0.0 };
        let cfg = VortexConfig { positions: vec![a, b], dispersion: DispersionSeries::nonrelativistic(), params };
        let v = vortex_rhs(&cfg).unwrap();
        let k = c(0.0, -params.hbar / params.m);
        assert!((v[0] - k / (a - b)).norm() < 1e-14);
        assert!((v[1] - k / (b - a)).norm() < 1e-14);
    }

    #[test]
    fn matches_contour_residue() {
        let xs = [c(0.5, 0.2), c(-0.6, 0.4), c(0.1, -0.9), c(1.2, 0.7)];
        let params = VortexParams { hbar: 1.1, m: 0.9, eps: 0.05 };
        let d = DispersionSeries::semirelativistic(2, 6);
        let cfg = VortexConfig { positions: xs.to_vec(), dispersion: d.clone(), params };
        let v = vortex_rhs(&cfg).unwrap();
        let coeffs = d.numeric_coeffs(&params.assignment());
        for k in 0..xs.len() {
            let oracle = residue_oracle(&xs, k, &coeffs, params.hbar);
            assert!((v[k] - oracle).norm() < 1e-9 * oracle.norm().max(1.0), "{k}: {} vs {oracle}", v[k]);
        }
    }

    #[test]
    fn coalesced_positions_rejected() {
        let cfg = VortexConfig {
            positions: vec![c(0.0, 0.0), c(1e-12, 0.0)],
            dispersion: DispersionSeries::nonrelativistic(),
            params: VortexParams::default(),
        };
        assert!(matches!(vortex_rhs(&cfg), Err(Error::CoalescedVortices(0, 1))));
    }

    #[test]
    fn h2_roots_at_unit_time() {
        let traj =
            zero_trajectories(&DispersionSeries::nonrelativistic(), 2, &[1.0], &VortexParams::default()).unwrap();
        let s = c(0.0, -1.0).sqrt();
        for r in &traj[0] {
            assert!((r - s).norm() < 1e-12 || (r + s).norm() < 1e-12);
        }
        let one = zero_trajectories(&DispersionSeries::nonrelativistic(), 1, &[0.5, 1.0], &VortexParams::default());
        assert!(one.unwrap().iter().all(|r| r[0].norm() == 0.0));
    }

    #[test]
    fn zeros_move_as_vortices() {
        for n in [2, 3] {
            let m = trajectory_velocity_mismatch(
                &DispersionSeries::nonrelativistic(),
                n,
                &VortexParams::default(),
                0.1,
                1.0,
                10,
            )
            .unwrap();
            assert!(m < 1e-6, "n={n}: {m}");
        }
    }

    #[test]
    fn ode_reproduces_roots() {
        let d = DispersionSeries::nonrelativistic();
        let params = VortexParams::default();
        let traj = zero_trajectories(&d, 3, &[0.1, 1.0], &params).unwrap();
        let cfg = VortexConfig { positions: traj[0].clone(), dispersion: d, params };
        let sol = integrate_vortices(&cfg, 0.1, &[1.0], Tolerances::default()).unwrap();
        for k in 0..3 {
            assert!((sol[0][k] - traj[1][k]).norm() < 1e-6);
        }
    }

    #[test]
    fn relativistic_correction_is_small() {
        let nr = DispersionSeries::nonrelativistic();
        let sr = DispersionSeries::semirelativistic(1, 4);
        let times = [0.5, 1.0];
        let a = zero_trajectories(&nr, 4, &times, &VortexParams::default()).unwrap();
        let b = zero_trajectories(&sr, 4, &times, &VortexParams { eps: 1e-4, ..Default::default() }).unwrap();
        let gap = a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        assert!(gap > 0.0 && gap < 1e-2);
    }
}
