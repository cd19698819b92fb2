use num_complex::Complex64;

use super::epoly_generate;
use crate::algebra::{Assignment, DispersionSeries, Var};

/// Physicists' Hermite polynomial by the three-term recurrence.
pub fn hermite_physicists(n: u32, z: Complex64) -> Complex64 {
    let mut h0 = Complex64::new(1.0, 0.0);
    if n == 0 {
        return h0;
    }
    let mut h1 = 2.0 * z;
    for k in 1..n {
        let h2 = 2.0 * z * h1 - 2.0 * k as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// Largest deviation between the generated Schrodinger polynomial and
/// `s^n He_n(x / 2s)` with `s^2 = -i hbar t / 2m`, over a fixed set of complex samples.
pub fn hermite_crosscheck(n: u32, hbar: f64, m: f64, t: f64) -> f64 {
    assert!(n <= 10, "cross-check supports n <= 10");
    assert!(t != 0.0, "t must be nonzero");
    let h = epoly_generate(&DispersionSeries::nonrelativistic(), n);
    let vals = Assignment::new().with(Var::Hbar, hbar).with(Var::M, m).with(Var::T, t);
    let coeffs = h.poly.univariate_coeffs(Var::X, &vals);
    let s = (Complex64::new(0.0, -hbar * t / (2.0 * m))).sqrt();
    let mut worst = 0.0_f64;
    for a in -4..=4 {
        for b in -2..=2 {
            let x = Complex64::new(0.5 * a as f64, 0.25 * b as f64);
            let lhs = coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c);
            let rhs = s.powu(n) * hermite_physicists(n, x / (2.0 * s));
            worst = worst.max((lhs - rhs).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recurrence_low_orders() {
        let z = Complex64::new(0.3, -0.7);
        assert!((hermite_physicists(2, z) - (4.0 * z * z - 2.0)).norm() < 1e-14);
        let h3 = 8.0 * z * z * z - 12.0 * z;
        assert!((hermite_physicists(3, z) - h3).norm() < 1e-14);
    }

    #[test]
    fn small_n_agree() {
        assert!(hermite_crosscheck(1, 1.0, 1.0, 1.0) < 1e-14);
        assert!(hermite_crosscheck(2, 1.0, 1.0, 1.0) < 1e-12);
        assert!(hermite_crosscheck(6, 0.7, 1.3, 0.4) < 1e-10);
        assert!(hermite_crosscheck(10, 1.0, 1.0, -0.8) < 1e-8);
    }
}
