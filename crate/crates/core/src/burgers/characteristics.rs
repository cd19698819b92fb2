use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{Assignment, DispersionSeries, Var};
use crate::error::{Error, Result};

/// Characteristic speed `v -> E~'(m v)` of the dispersionless velocity equation.
#[derive(Clone, Debug, PartialEq)]
pub enum Speed {
    /// `v`.
    Nonrelativistic,
    /// `v / sqrt(1 + v^2/c^2)`.
    Relativistic { c: f64 },
    /// `sum_n D_n (m v)^n` from a truncated series.
    Series { coeffs: Vec<(u32, f64)>, m: f64 },
}

impl Speed {
    pub fn from_dispersion(dispersion: &DispersionSeries, m: f64, eps: f64) -> Self {
        let vals = Assignment::new().with(Var::M, m).with(Var::Eps, eps);
        let coeffs = dispersion.derivative().coeffs().map(|(n, c)| (n, c.eval(&vals).re)).collect();
        Speed::Series { coeffs, m }
    }

    pub fn value(&self, v: f64) -> f64 {
        match self {
            Speed::Nonrelativistic => v,
            Speed::Relativistic { c } => v / (1.0 + v * v / (c * c)).sqrt(),
            Speed::Series { coeffs, m } => coeffs.iter().map(|(n, d)| d * (m * v).powi(*n as i32)).sum(),
        }
    }

    /// `d speed / dv`.
    pub fn slope(&self, v: f64) -> f64 {
        match self {
            Speed::Nonrelativistic => 1.0,
            Speed::Relativistic { c } => (1.0 + v * v / (c * c)).powf(-1.5),
            Speed::Series { coeffs, m } => coeffs
                .iter()
                .filter(|(n, _)| *n > 0)
                .map(|(n, d)| d * *n as f64 * m * (m * v).powi(*n as i32 - 1))
                .sum(),
        }
    }
}

/// Closed-form initial profiles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    /// `tanh x`.
    Tanh,
    /// `-tanh x`.
    NegTanh,
    /// `1 - tanh x`.
    OneMinusTanh,
    /// `exp(-x^2)`.
    Gaussian,
}

impl Shape {
    pub fn value(self, x: f64) -> f64 {
        match self {
            Shape::Tanh => x.tanh(),
            Shape::NegTanh => -x.tanh(),
            Shape::OneMinusTanh => 1.0 - x.tanh(),
            Shape::Gaussian => (-x * x).exp(),
        }
    }

    pub fn derivative(self, x: f64) -> f64 {
        let sech2 = 1.0 / x.cosh().powi(2);
        match self {
            Shape::Tanh => sech2,
            Shape::NegTanh | Shape::OneMinusTanh => -sech2,
            Shape::Gaussian => -2.0 * x * (-x * x).exp(),
        }
    }
}

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Initial classical velocity `f`, characteristic speed, and the interval on
/// which `f` is given.
#[derive(Clone)]
pub struct CharacteristicProfile {
    f: RealFn,
    df: RealFn,
    pub speed: Speed,
    pub domain: (f64, f64),
}

impl fmt::Debug for CharacteristicProfile {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        fm.debug_struct("CharacteristicProfile").field("speed", &self.speed).field("domain", &self.domain).finish()
    }
}

const SCAN_POINTS: usize = 4001;
const ROOT_TOL: f64 = 1e-13;
const MAX_ITER: usize = 300;
const MAX_GROW: usize = 64;

impl CharacteristicProfile {
    /// Profile with a known derivative.
    pub fn new(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        df: impl Fn(f64) -> f64 + Send + Sync + 'static,
        speed: Speed,
        domain: (f64, f64),
    ) -> Result<Self> {
        let p = Self { f: Arc::new(f), df: Arc::new(df), speed, domain };
        p.validate()?;
        Ok(p)
    }

    /// Profile whose derivative is taken by central differences.
    pub fn from_fn(f: impl Fn(f64) -> f64 + Send + Sync + 'static, speed: Speed, domain: (f64, f64)) -> Result<Self> {
        let f: RealFn = Arc::new(f);
        let g = f.clone();
        let h = 1e-6 * (domain.1 - domain.0).abs().max(1.0);
        let df = move |x: f64| (g(x + h) - g(x - h)) / (2.0 * h);
        let p = Self { f, df: Arc::new(df), speed, domain };
        p.validate()?;
        Ok(p)
    }

    pub fn from_shape(shape: Shape, speed: Speed, domain: (f64, f64)) -> Result<Self> {
        Self::new(move |x| shape.value(x), move |x| shape.derivative(x), speed, domain)
    }

    /// Finite values everywhere and a derivative consistent with the values.
    fn validate(&self) -> Result<()> {
        let (a, b) = self.domain;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidParameter(format!("bad domain [{a}, {b}]")));
        }
        let h = 1e-4 * (b - a);
        for k in 1..200 {
            let x = a + (b - a) * k as f64 / 200.0;
            let (f0, d0) = ((self.f)(x), (self.df)(x));
            if !f0.is_finite() || !d0.is_finite() {
                return Err(Error::InvalidParameter(format!("profile not finite at {x}")));
            }
            let fd = ((self.f)(x + h) - (self.f)(x - h)) / (2.0 * h);
            let scale = 1.0 + d0.abs() + f0.abs();
            if (fd - d0).abs() > 1e-3 * scale {
                return Err(Error::InvalidParameter(format!("profile not continuously differentiable near {x}")));
            }
        }
        Ok(())
    }

    pub fn initial(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn initial_slope(&self, x: f64) -> f64 {
        (self.df)(x)
    }

    /// `d/dx0 speed(f(x0))`.
    pub fn speed_gradient(&self, x0: f64) -> f64 {
        self.speed.slope((self.f)(x0)) * (self.df)(x0)
    }

    fn scan(&self) -> impl Iterator<Item = f64> + '_ {
        let (a, b) = self.domain;
        (0..SCAN_POINTS).map(move |k| a + (b - a) * k as f64 / (SCAN_POINTS - 1) as f64)
    }
}

/// Golden-section minimization on `[a, b]`.
fn golden_min(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    while (b - a).abs() > 1e-12 * (1.0 + a.abs() + b.abs()) {
        if gc < gd {
            b = d;
            d = c;
            gd = gc;
            c = b - r * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + r * (b - a);
            gd = g(d);
        }
    }
    0.5 * (a + b)
}

/// Shock time and where the first crossing originates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Shock {
    pub time: f64,
    pub origin: f64,
}

/// `t* = -1 / min d/dx0 speed(f(x0))`, or `None` when characteristics never
/// converge. Dense scan, then golden-section refinement around the minimum.
pub fn shock(prof: &CharacteristicProfile) -> Option<Shock> {
    let pts: Vec<f64> = prof.scan().collect();
    let (k, _) = pts
        .iter()
        .map(|&x| prof.speed_gradient(x))
        .enumerate()
        .fold((0, f64::INFINITY), |best, (k, g)| if g < best.1 { (k, g) } else { best });
    let a = pts[k.saturating_sub(1)];
    let b = pts[(k + 1).min(pts.len() - 1)];
    let origin = golden_min(|x| prof.speed_gradient(x), a, b);
    let min = prof.speed_gradient(origin).min(prof.speed_gradient(pts[k]));
    (min < 0.0).then(|| Shock { time: -1.0 / min, origin })
}

pub fn shock_time(prof: &CharacteristicProfile) -> Option<f64> {
    shock(prof).map(|s| s.time)
}

/// Solves `V = f(x - speed(V) t)` for the classical velocity before the shock.
/// Works on the foot point `x0`, where `x0 + speed(f(x0)) t - x` is increasing
/// before the shock; the bracket grows past the domain when the foot lies
/// outside it, so `f` must be defined there.
pub fn characteristics_solve(prof: &CharacteristicProfile, x: f64, t: f64) -> Result<f64> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("time must be non-negative, got {t}")));
    }
    if t == 0.0 {
        return Ok(prof.initial(x));
    }
    if let Some(s) = shock_time(prof) {
        if t >= s {
            return Err(Error::ShockReached { t, shock: s });
        }
    }
    let foot = |x0: f64| x0 + prof.speed.value(prof.initial(x0)) * t - x;
    let (s_lo, s_hi) = prof
        .scan()
        .map(|x0| prof.speed.value(prof.initial(x0)))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(v), h.max(v)));
    let width = (prof.domain.1 - prof.domain.0).max(1.0);
    let (mut lo, mut hi) = (x - s_hi * t - 1e-3 * width, x - s_lo * t + 1e-3 * width);
    let (mut flo, mut fhi) = (foot(lo), foot(hi));
    let mut grow = width;
    for _ in 0..MAX_GROW {
        if flo <= 0.0 && fhi >= 0.0 {
            break;
        }
        if flo > 0.0 {
            lo -= grow;
            flo = foot(lo);
        }
        if fhi < 0.0 {
            hi += grow;
            fhi = foot(hi);
        }
        grow *= 2.0;
    }
    if !(flo <= 0.0 && fhi >= 0.0) {
        return Err(Error::NoBracket(x));
    }
    if flo == 0.0 {
        return Ok(prof.initial(lo));
    }
    if fhi == 0.0 {
        return Ok(prof.initial(hi));
    }
    let (mut last, mut cur) = ((lo, flo), (hi, fhi));
    for iter in 0..MAX_ITER {
        let secant = cur.0 - cur.1 * (cur.0 - last.0) / (cur.1 - last.1);
        // Every third step bisects so the bracket always shrinks.
        let next = if iter % 3 != 2 && secant.is_finite() && secant > lo && secant < hi {
            secant
        } else {
            0.5 * (lo + hi)
        };
        let gn = foot(next);
        if gn == 0.0 {
            return Ok(prof.initial(next));
        }
        if gn < 0.0 {
            lo = next;
        } else {
            hi = next;
        }
        if (next - cur.0).abs() < ROOT_TOL * (1.0 + next.abs()) || hi - lo < ROOT_TOL * (1.0 + next.abs()) {
            return Ok(prof.initial(next));
        }
        last = cur;
        cur = (next, gn);
    }
    Ok(prof.initial(cur.0))
}
