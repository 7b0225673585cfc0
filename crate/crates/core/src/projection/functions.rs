//! Target functions with exact derivatives.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

type Evaluator = Arc<dyn Fn(f64, usize) -> f64 + Send + Sync>;

/// Highest derivative order provided by the built-in catalog.
pub const CATALOG_R_MAX: usize = 16;

const PERIODIC_TOL: f64 = 1e-12;
const SCALE_SAMPLES: usize = 65;

/// A function `u` with derivatives `∂^ℓ u`, `ℓ ≤ r_max`.
#[derive(Clone)]
pub struct FunctionSpec {
    name: String,
    r_max: usize,
    eval: Evaluator,
    periodic: bool,
}

impl fmt::Debug for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionSpec")
            .field("name", &self.name)
            .field("r_max", &self.r_max)
            .field("periodic", &self.periodic)
            .finish()
    }
}

/// `∂^ℓ` of `sin(ωx + φ)`.
fn sine_derivative(omega: f64, phase: f64, x: f64, l: usize) -> f64 {
    omega.powi(l as i32) * (omega * x + phase + l as f64 * PI / 2.0).sin()
}

fn falling(d: usize, l: usize) -> f64 {
    (0..l).map(|i| (d - i) as f64).product()
}

impl FunctionSpec {
    /// Wraps an evaluator; the periodic flag is determined numerically on (0, 1).
    pub fn custom(
        name: impl Into<String>,
        r_max: usize,
        eval: impl Fn(f64, usize) -> f64 + Send + Sync + 'static,
    ) -> Self {
        let mut f = Self { name: name.into(), r_max, eval: Arc::new(eval), periodic: false };
        f.periodic = f.periodic_order(0.0, 1.0) >= r_max;
        f
    }

    /// `sin(ωx + φ)`.
    pub fn sine(name: impl Into<String>, omega: f64, phase: f64) -> Self {
        Self::custom(name, CATALOG_R_MAX, move |x, l| sine_derivative(omega, phase, x, l))
    }

    /// Catalog lookup: `sin_m` = sin(mπx), `cos_m` = cos(mπx), `poly_d` = x^d,
    /// `exp`, `runge` = 1/(1+25x²).
    pub fn by_name(name: &str) -> Result<Self> {
        let unknown = || Error::UnknownFunction(name.to_string());
        if let Some(m) = name.strip_prefix("sin_") {
            let m: u32 = m.parse().map_err(|_| unknown())?;
            return Ok(Self::sine(name, m as f64 * PI, 0.0));
        }
        if let Some(m) = name.strip_prefix("cos_") {
            let m: u32 = m.parse().map_err(|_| unknown())?;
            return Ok(Self::sine(name, m as f64 * PI, PI / 2.0));
        }
        if let Some(d) = name.strip_prefix("poly_") {
            let d: usize = d.parse().map_err(|_| unknown())?;
            return Ok(Self::custom(name, CATALOG_R_MAX, move |x, l| {
                if l > d {
                    0.0
                } else {
                    falling(d, l) * x.powi((d - l) as i32)
                }
            }));
        }
        match name {
            "exp" => Ok(Self::custom(name, CATALOG_R_MAX, |x, _| x.exp())),
            "runge" => Ok(Self::custom(name, CATALOG_R_MAX, runge_derivative)),
            _ => Err(unknown()),
        }
    }

    /// `c · u`, keeping the periodic flag.
    pub fn scaled(&self, name: impl Into<String>, c: f64) -> Self {
        let inner = self.eval.clone();
        Self { name: name.into(), r_max: self.r_max, eval: Arc::new(move |x, l| c * inner(x, l)), periodic: self.periodic }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn r_max(&self) -> usize {
        self.r_max
    }

    /// True when `∂^α u(0) = ∂^α u(1)` for every `α < r_max`.
    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    /// `∂^l u(x)`.
    pub fn eval(&self, x: f64, l: usize) -> Result<f64> {
        if l > self.r_max {
            return Err(Error::DerivativeOrder { order: l, max: self.r_max });
        }
        Ok((self.eval)(x, l))
    }

    /// Unchecked evaluation for hot loops (caller has validated `l`).
    pub(crate) fn value(&self, x: f64, l: usize) -> f64 {
        (self.eval)(x, l)
    }

    /// Number of leading orders `α = 0, 1, …` with `∂^α u(a) = ∂^α u(b)`,
    /// compared relative to `max |∂^α u|` sampled on `[a, b]`.
    pub fn periodic_order(&self, a: f64, b: f64) -> usize {
        for alpha in 0..self.r_max {
            let ua = self.value(a, alpha);
            let ub = self.value(b, alpha);
            let scale = (0..SCALE_SAMPLES)
                .map(|i| a + (b - a) * i as f64 / (SCALE_SAMPLES - 1) as f64)
                .map(|x| self.value(x, alpha).abs())
                .fold(1e-300_f64, f64::max);
            if (ua - ub).abs() > PERIODIC_TOL * scale {
                return alpha;
            }
        }
        self.r_max
    }
}

/// `∂^ℓ (1 + 25x²)^{-1}` via `(1/(25β)) Im[(x - iβ)^{-1}]`, `β = 1/5`.
fn runge_derivative(x: f64, l: usize) -> f64 {
    let beta = 0.2;
    let z = Complex64::new(x, -beta);
    let fact: f64 = (1..=l).map(|i| i as f64).product();
    let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
    let w = z.powi(-(l as i32) - 1);
    sign * fact * w.im / (25.0 * beta)
}

/// `u(x, y) = Σ_t f_t(x) g_t(y)`.
#[derive(Debug, Clone)]
pub struct SeparableFunction {
    pub terms: Vec<(FunctionSpec, FunctionSpec)>,
}

impl SeparableFunction {
    pub fn product(f: FunctionSpec, g: FunctionSpec) -> Self {
        Self { terms: vec![(f, g)] }
    }

    pub fn eval(&self, x: f64, y: f64, lx: usize, ly: usize) -> f64 {
        self.terms.iter().map(|(f, g)| f.value(x, lx) * g.value(y, ly)).sum()
    }

    pub fn r_max(&self) -> usize {
        self.terms.iter().map(|(f, g)| f.r_max().min(g.r_max())).min().unwrap_or(0)
    }
}
