//! `E(A, X) = ‖(I - P)T‖` against the exact Kolmogorov n-widths.

use super::grid::{FineGrid, KernelOperator, OperatorChain};
use crate::error::{Error, Result};
use crate::numerics::{power_iteration, Cholesky, Mat};
use crate::projection::gram_matrix;
use crate::space::SplineSpace;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Rayleigh-quotient tolerance of the power iteration.
pub const POWER_TOL: f64 = 1e-12;
pub const POWER_MAX_ITER: usize = 20_000;
/// Required agreement between the `M` and `2M` grids.
pub const CERTIFICATE_TOL: f64 = 1e-3;
const POWER_SEED: u64 = 0x5eed;

/// Function classes with a known integral-operator representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionClass {
    /// `{u ∈ H^r_per : ‖∂^r u‖ ≤ 1} = P_0 ⊕ K^r(B)`, periodic Green's operator.
    APer,
    /// `{u ∈ H^r : ‖∂^r u‖ ≤ 1}`; only `r = 1` has a closed form here.
    AFull,
    /// Even derivatives below `r` vanish at both ends.
    #[serde(rename = "a_0")]
    A0,
    /// Odd derivatives below `r` vanish at both ends.
    #[serde(rename = "a_1")]
    A1,
    /// Even derivatives vanish at `a`, odd ones at `b`.
    #[serde(rename = "a_2")]
    A2,
}

impl FunctionClass {
    pub fn name(&self) -> &'static str {
        match self {
            Self::APer => "a_per",
            Self::AFull => "a_full",
            Self::A0 => "a_0",
            Self::A1 => "a_1",
            Self::A2 => "a_2",
        }
    }

    /// Whether the class contains the constants as a free summand.
    pub fn has_constants(&self) -> bool {
        matches!(self, Self::APer | Self::AFull | Self::A1)
    }

    /// The operator `T` with `A = T(B)` (modulo constants).
    pub fn operator(&self, r: usize) -> Result<OperatorChain> {
        if r == 0 {
            return Err(Error::Invalid("class order r must be at least 1".into()));
        }
        Ok(match self {
            Self::APer => OperatorChain::power(KernelOperator::PeriodicGreen, r),
            Self::AFull if r == 1 => OperatorChain::power(KernelOperator::LeftIntegration, 1),
            Self::AFull => return Err(Error::Unsupported(format!("no closed form implemented for a_full with r = {r}"))),
            Self::A0 => OperatorChain::alternating(KernelOperator::NeumannFactor, r, true),
            Self::A1 => OperatorChain::alternating(KernelOperator::NeumannFactor, r, false),
            Self::A2 => OperatorChain::alternating(KernelOperator::LeftIntegration, r, false),
        })
    }
}

/// Kolmogorov n-width of a class on an interval of length `len`.
pub fn exact_nwidth(class: FunctionClass, r: usize, n: usize, len: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Invalid("n-width needs n >= 1".into()));
    }
    if r == 0 {
        return Err(Error::Invalid("class order r must be at least 1".into()));
    }
    let nf = n as f64;
    let base = match class {
        FunctionClass::APer => len / (2.0 * PI * n.div_ceil(2) as f64),
        FunctionClass::AFull if r == 1 => len / (nf * PI),
        FunctionClass::AFull => {
            return Err(Error::Unsupported(format!("no closed form implemented for a_full with r = {r}")))
        }
        FunctionClass::A0 => len / ((nf + 1.0) * PI),
        FunctionClass::A1 => len / (nf * PI),
        FunctionClass::A2 => len / ((nf + 0.5) * PI),
    };
    Ok(base.powi(r as i32))
}

/// The `L2` projection onto a spline space, acting on grid samples.
pub struct GridProjector {
    samples: Mat,
    gram: Cholesky,
    weights: Vec<f64>,
}

impl GridProjector {
    pub fn new(space: &SplineSpace, grid: &FineGrid) -> Result<Self> {
        if (space.breaks().a() - grid.a()).abs() > 1e-14 || (space.breaks().length() - grid.length()).abs() > 1e-14 {
            return Err(Error::Dimension("grid and space live on different intervals".into()));
        }
        let mut samples = Mat::zeros(space.dim(), grid.len());
        for (c, &x) in grid.nodes().iter().enumerate() {
            for (i, v) in space.eval_basis(x, 0)?.into_iter().enumerate() {
                samples[(i, c)] = v;
            }
        }
        let gram = Cholesky::factor(&gram_matrix(space, 0)?)?;
        Ok(Self { samples, gram, weights: grid.weights().to_vec() })
    }

    pub fn project(&self, f: &[f64]) -> Vec<f64> {
        let wf: Vec<f64> = f.iter().zip(&self.weights).map(|(a, b)| a * b).collect();
        let c = self.gram.solve(&self.samples.matvec(&wf));
        self.samples.tr_matvec(&c)
    }

    pub fn residual(&self, f: &[f64]) -> Vec<f64> {
        let pf = self.project(f);
        f.iter().zip(&pf).map(|(a, b)| a - b).collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorNorm {
    pub value: f64,
    pub nodes: usize,
    pub iterations: usize,
    pub converged: bool,
}

/// `‖(I - P)T‖` on one grid by power iteration on `T*(I - P)T`.
pub fn residual_norm_on_grid(space: &SplineSpace, chain: &OperatorChain, grid: &FineGrid) -> Result<OperatorNorm> {
    let proj = GridProjector::new(space, grid)?;
    let sw: Vec<f64> = grid.weights().iter().map(|w| w.sqrt()).collect();
    // symmetric in the Euclidean product after the W^{1/2} similarity
    let apply = |z: &[f64]| -> Vec<f64> {
        let x: Vec<f64> = z.iter().zip(&sw).map(|(a, s)| a / s).collect();
        let y = proj.residual(&chain.apply(grid, &x));
        chain.apply_adjoint(grid, &y).iter().zip(&sw).map(|(a, s)| a * s).collect()
    };
    let it = power_iteration(apply, grid.len(), POWER_TOL, POWER_MAX_ITER, POWER_SEED);
    Ok(OperatorNorm { value: it.value.max(0.0).sqrt(), nodes: grid.len(), iterations: it.iterations, converged: it.converged })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormReport {
    pub class: FunctionClass,
    pub r: usize,
    pub dim: usize,
    /// `‖(I - P)T‖` on the `M` grid.
    pub error: f64,
    /// Same on the `2M` grid.
    pub error_fine: f64,
    /// Relative difference of the two.
    pub certificate: f64,
    pub nodes: usize,
    pub converged: bool,
    pub nwidth: Option<f64>,
    pub ratio: Option<f64>,
}

impl NormReport {
    pub fn certified(&self) -> bool {
        self.converged && self.certificate <= CERTIFICATE_TOL
    }
}

/// `E(A^r, X)` for the class with its grid certificate, and the ratio to the
/// exact n-width where one is known.
pub fn residual_operator_norm(space: &SplineSpace, class: FunctionClass, r: usize, m: usize) -> Result<NormReport> {
    if class.has_constants() && !space.contains_constants() {
        return Err(Error::Hypothesis(format!(
            "class {} contains the constants but the space does not, so the error is unbounded",
            class.name()
        )));
    }
    let chain = class.operator(r)?;
    let coarse = residual_norm_on_grid(space, &chain, &FineGrid::new(space.breaks(), m)?)?;
    let fine = residual_norm_on_grid(space, &chain, &FineGrid::new(space.breaks(), 2 * m)?)?;
    let nwidth = exact_nwidth(class, r, space.dim(), space.breaks().length()).ok();
    Ok(NormReport {
        class,
        r,
        dim: space.dim(),
        error: coarse.value,
        error_fine: fine.value,
        certificate: (coarse.value - fine.value).abs() / fine.value.abs().max(f64::MIN_POSITIVE),
        nodes: coarse.nodes,
        converged: coarse.converged && fine.converged,
        nwidth,
        ratio: nwidth.map(|d| coarse.value / d),
    })
}

/// `E(A^r, X) / d_n(A^r)` with `n = dim X`.
pub fn optimality_ratio(space: &SplineSpace, class: FunctionClass, r: usize, m: usize) -> Result<f64> {
    let rep = residual_operator_norm(space, class, r, m)?;
    rep.ratio.ok_or_else(|| Error::Unsupported(format!("no closed-form n-width for {} with r = {r}", class.name())))
}
