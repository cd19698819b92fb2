//! Complex polynomial roots (Aberth-Ehrlich iteration) and root labeling.

use num_complex::Complex64;

use crate::error::{Error, Result};

fn horner(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// All roots of `sum_k coeffs[k] x^k`. Trailing (leading-order) zeros are ignored.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|z| *z == Complex64::new(0.0, 0.0)) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    for z in &mut c {
        *z /= lead;
    }
    // Exact zero roots are split off so the iteration only sees simple structure.
    let zeros = c.iter().take_while(|z| z.norm() == 0.0).count();
    let c = &c[zeros..];
    let deg = c.len() - 1;
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    if deg == 0 {
        return roots;
    }
    let radius = 1.0 + c[..deg].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let radius = radius.min(
        c[..deg]
            .iter()
            .enumerate()
            .map(|(k, z)| 2.0 * z.norm().powf(1.0 / (deg - k) as f64))
            .fold(0.0, f64::max)
            .max(1e-300),
    );
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / deg as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut max_step = 0.0_f64;
        for k in 0..deg {
            let (p, dp) = horner(c, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 =
                (0..deg).filter(|&j| j != k).map(|j| Complex64::new(1.0, 0.0) / (z[k] - z[j])).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if step.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / z[k].norm().max(1e-300));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    for r in &mut z {
        for _ in 0..3 {
            let (p, dp) = horner(c, *r);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.is_finite() {
                break;
            }
            *r -= step;
        }
    }
    roots.extend(z);
    roots
}

/// Reorders `next` to follow the labels of `prev` by nearest-neighbour matching.
/// Fails when two candidate roots lie within `tol` of each other.
pub fn track_roots(prev: &[Complex64], next: &[Complex64], t: f64, tol: f64) -> Result<Vec<Complex64>> {
    assert_eq!(prev.len(), next.len());
    for i in 0..next.len() {
        for j in i + 1..next.len() {
            if (next[i] - next[j]).norm() < tol {
                return Err(Error::RootTrackingAmbiguous { t, tol });
            }
        }
    }
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(prev.len() * next.len());
    for (i, a) in prev.iter().enumerate() {
        for (j, b) in next.iter().enumerate() {
            pairs.push(((a - b).norm(), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out = vec![None; prev.len()];
    let mut used = vec![false; next.len()];
    for (_, i, j) in pairs {
        if out[i].is_none() && !used[j] {
            out[i] = Some(next[j]);
            used[j] = true;
        }
    }
    Ok(out.into_iter().map(|z| z.expect("complete matching")).collect())
}
