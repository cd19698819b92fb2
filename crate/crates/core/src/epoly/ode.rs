//! Adaptive Dormand-Prince 5(4) integrator for complex systems.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rtol: 1e-9, atol: 1e-12, max_steps: 1_000_000 }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates `y' = f(t, y)` from `(t0, y0)` and returns the state at each of
/// `t_out` (which must be monotone in the direction of integration).
pub fn dopri5<F>(mut f: F, t0: f64, y0: &[Complex64], t_out: &[f64], tol: Tolerances) -> Result<Vec<Vec<Complex64>>>
where
    F: FnMut(f64, &[Complex64]) -> Result<Vec<Complex64>>,
{
    let n = y0.len();
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut out = Vec::with_capacity(t_out.len());
    let span = t_out.last().map_or(0.0, |tl| tl - t0);
    let dir = if span < 0.0 { -1.0 } else { 1.0 };
    let mut h = (span.abs() * 1e-3).max(1e-8) * dir;
    let mut steps = 0usize;
    let mut k = vec![vec![Complex64::new(0.0, 0.0); n]; 7];
    for &target in t_out {
        while (target - t) * dir > 0.0 {
            steps += 1;
            if steps > tol.max_steps {
                return Err(Error::StabilityGuard(h));
            }
            let last = (target - t - h) * dir <= 0.0;
            let hs = if last { target - t } else { h };
            k[0] = f(t, &y)?;
            for s in 1..7 {
                let ys: Vec<Complex64> =
                    (0..n).map(|i| y[i] + hs * (0..s).map(|j| A[s][j] * k[j][i]).sum::<Complex64>()).collect();
                k[s] = f(t + C[s] * hs, &ys)?;
            }
            let mut err = 0.0_f64;
            let mut y5 = vec![Complex64::new(0.0, 0.0); n];
            for i in 0..n {
                let d5: Complex64 = (0..7).map(|s| B5[s] * k[s][i]).sum();
                let d4: Complex64 = (0..7).map(|s| B4[s] * k[s][i]).sum();
                y5[i] = y[i] + hs * d5;
                let scale = tol.atol + tol.rtol * y[i].norm().max(y5[i].norm());
                err = err.max((hs * (d5 - d4)).norm() / scale);
            }
            if err <= 1.0 {
                t = if last { target } else { t + hs };
                y = y5;
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            if !(err <= 1.0 && last) {
                h = hs * factor;
            }
            if h.abs() < 1e-14 * t.abs().max(1.0) {
                return Err(Error::StabilityGuard(h));
            }
        }
        out.push(y.clone());
    }
    Ok(out)
}
