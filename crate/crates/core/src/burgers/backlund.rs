use num_complex::Complex64;

use super::field::VelocityField;
use super::jet::{JetEvaluator, NumJet};
use super::madelung::velocity_operator;
use crate::algebra::{Assignment, DiffPoly, DispersionSeries, GaussianRational, MultiPoly, Var};
use crate::error::{Error, Result};

/// Default radius excluded around each detected singular point.
pub const DEFAULT_EXCLUSION: f64 = 0.1;

/// `|den|` below which a sample is on the singular locus.
const SINGULAR_TOL: f64 = 1e-12;

/// `V2 = V1 + num / den` with `den = x - t E~'(-i hbar D + m V1) . 1` and
/// `num = -i (hbar/m) D den`, both differential polynomials in `V = V1` with
/// explicit `x`, `t` in the coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct BacklundForm {
    pub den: DiffPoly,
    pub num: DiffPoly,
}

impl BacklundForm {
    pub fn new(dispersion: &DispersionSeries) -> Self {
        let speed = dispersion
            .derivative()
            .apply(&DiffPoly::one(), |g| Ok::<_, Error>(velocity_operator(g)))
            .expect("infallible");
        let den = &DiffPoly::constant(MultiPoly::var(Var::X)) - &speed.scale(&MultiPoly::var(Var::T));
        let factor = &MultiPoly::i().scale(&GaussianRational::from_int(-1))
            * &(&MultiPoly::var(Var::Hbar) * &MultiPoly::var_pow(Var::M, -1));
        let num = den.total_x_derivative().scale(&factor);
        Self { den, num }
    }

    pub fn nonrelativistic() -> Self {
        Self::new(&DispersionSeries::nonrelativistic())
    }

    pub fn subs(&self, v: Var, value: &MultiPoly) -> Self {
        Self { den: self.den.subs(v, value), num: self.num.subs(v, value) }
    }

    /// True when the map reduces to `V2 = V1` as `hbar -> 0`.
    pub fn is_identity_as_hbar_vanishes(&self) -> bool {
        let zero = MultiPoly::zero();
        self.num.subs(Var::Hbar, &zero).is_zero() && !self.den.subs(Var::Hbar, &zero).is_zero()
    }

    /// Compiles the map for pointwise numeric use; `order` is the number of
    /// x-derivatives wanted in the output.
    pub fn compile(&self, order: usize, hbar: f64, m: f64, eps: f64) -> BacklundMap {
        let den = JetEvaluator::new(&self.den, order + 1);
        let needed = den.required_order();
        BacklundMap { den, order, needed, hbar, m, eps }
    }
}

#[derive(Clone, Debug)]
pub struct BacklundMap {
    den: JetEvaluator,
    order: usize,
    needed: usize,
    hbar: f64,
    m: f64,
    eps: f64,
}

/// Bäcklund image of a sampled field with the singular neighbourhoods removed.
#[derive(Clone, Debug)]
pub struct BacklundImage {
    pub field: VelocityField,
    /// Complex zeros of the denominator found near the sample axis.
    pub loci: Vec<Complex64>,
}

impl BacklundMap {
    /// Order of the jet of `V1` the map reads.
    pub fn required_order(&self) -> usize {
        self.needed
    }

    fn assignment(&self, x: f64, t: f64) -> Assignment {
        Assignment::new()
            .with(Var::X, x)
            .with(Var::T, t)
            .with(Var::Hbar, self.hbar)
            .with(Var::M, self.m)
            .with(Var::Eps, self.eps)
    }

    /// Jet of the denominator at `(x, t)`.
    pub fn denominator(&self, v1: &NumJet, x: f64, t: f64) -> Result<NumJet> {
        self.den.eval(&self.assignment(x, t), v1)
    }

    /// Jet of `V2` at `(x, t)` from the jet of `V1`.
    pub fn apply(&self, v1: &NumJet, x: f64, t: f64) -> Result<NumJet> {
        let den = self.denominator(v1, x, t)?;
        if den.value().norm() < SINGULAR_TOL {
            return Err(Error::SingularLocus(x));
        }
        let num = den.shift().scale(Complex64::new(0.0, -self.hbar / self.m));
        let ratio = num.div(&den.truncated(self.order)).map_err(|_| Error::SingularLocus(x))?;
        Ok(&v1.truncated(self.order) + &ratio)
    }

    /// Applies the map to every sample, removing points within `radius` of a
    /// zero of the denominator (located by a Newton step from each sample).
    pub fn apply_field(&self, v1: &VelocityField, radius: f64) -> Result<BacklundImage> {
        if v1.jet_order() < self.needed {
            return Err(Error::InvalidParameter(format!(
                "input jets of order {} needed, have {}",
                self.needed,
                v1.jet_order()
            )));
        }
        let spacing = v1.x.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
        let mut loci: Vec<Complex64> = Vec::new();
        for (&x, j) in v1.x.iter().zip(&v1.jets) {
            let d = self.denominator(j, x, v1.t)?;
            if d.0[1] == Complex64::new(0.0, 0.0) {
                continue;
            }
            let z = Complex64::new(x, 0.0) - d.0[0] / d.0[1];
            if (z - x).norm() <= spacing.max(radius) && !loci.iter().any(|l| (l - z).norm() < 0.5 * spacing) {
                loci.push(z);
            }
        }
        let keep: Vec<usize> =
            (0..v1.len()).filter(|&i| loci.iter().all(|l| (l - v1.x[i]).norm() >= radius)).collect();
        let x: Vec<f64> = keep.iter().map(|&i| v1.x[i]).collect();
        let jets = keep.iter().map(|&i| self.apply(&v1.jets[i], v1.x[i], v1.t)).collect::<Result<Vec<_>>>()?;
        Ok(BacklundImage { field: VelocityField::new(x, v1.t, jets, v1.hbar, v1.m)?, loci })
    }
}
