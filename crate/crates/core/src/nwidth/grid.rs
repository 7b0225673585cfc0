//! Integral operators sampled on a composite Gauss grid.

use crate::error::{Error, Result};
use crate::knots::BreakSequence;
use crate::numerics::{gauss_legendre, QuadratureRule};
use serde::{Deserialize, Serialize};

/// Gauss nodes per grid sub-element.
pub const GRID_NODES: usize = 16;
/// Smallest admissible grid size.
pub const MIN_GRID: usize = 500;
/// Largest grid size accepted from callers; the refinement certificate
/// doubles it internally.
pub const MAX_GRID: usize = 8000;

/// Composite Gauss grid whose sub-elements refine a break sequence, with the
/// exact partial-integration matrices of the reference element.
#[derive(Debug, Clone)]
pub struct FineGrid {
    rule: QuadratureRule,
    /// `left[i][j] = ∫_{-1}^{t_i} ℓ_j`, `ℓ_j` the Lagrange basis on the nodes.
    left: Vec<Vec<f64>>,
    /// `right[i][j] = ∫_{t_i}^{1} ℓ_j`.
    right: Vec<Vec<f64>>,
}

fn lagrange(nodes: &[f64], j: usize, x: f64) -> f64 {
    nodes
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != j)
        .map(|(_, &t)| (x - t) / (nodes[j] - t))
        .product()
}

impl FineGrid {
    /// At least `min_nodes` nodes, each element of `breaks` split into equal
    /// sub-elements.
    pub fn new(breaks: &BreakSequence, min_nodes: usize) -> Result<Self> {
        if !(MIN_GRID..=2 * MAX_GRID).contains(&min_nodes) {
            return Err(Error::Invalid(format!("grid size must lie in {MIN_GRID}..={}, got {min_nodes}", 2 * MAX_GRID)));
        }
        let per_element = GRID_NODES * breaks.num_intervals();
        let parts = min_nodes.div_ceil(per_element).max(1);
        let rule = QuadratureRule::composite(&breaks.refine(parts), GRID_NODES)?;
        let g = gauss_legendre(GRID_NODES)?;
        let mut left = vec![vec![0.0; GRID_NODES]; GRID_NODES];
        for (i, &ti) in g.nodes.iter().enumerate() {
            let half = 0.5 * (ti + 1.0);
            for (xi, wi) in g.nodes.iter().zip(&g.weights) {
                let s = -1.0 + half * (xi + 1.0);
                for (j, l) in left[i].iter_mut().enumerate() {
                    *l += half * wi * lagrange(&g.nodes, j, s);
                }
            }
        }
        let right = left.iter().map(|row| row.iter().zip(&g.weights).map(|(l, w)| w - l).collect()).collect();
        Ok(Self { rule, left, right })
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn nodes(&self) -> &[f64] {
        self.rule.nodes()
    }

    pub fn weights(&self) -> &[f64] {
        self.rule.weights()
    }

    pub fn len(&self) -> usize {
        self.rule.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rule.is_empty()
    }

    pub fn a(&self) -> f64 {
        self.rule.breaks().a()
    }

    pub fn length(&self) -> f64 {
        self.rule.breaks().length()
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.nodes().iter().map(|&x| f(x)).collect()
    }

    pub fn integral(&self, f: &[f64]) -> f64 {
        self.rule.integrate_samples(f)
    }

    pub fn mean(&self, f: &[f64]) -> f64 {
        self.integral(f) / self.length()
    }

    /// `∫_a^x f`, exact for the piecewise interpolant of the samples.
    pub fn integrate_left(&self, f: &[f64]) -> Vec<f64> {
        let m = GRID_NODES;
        let mut out = vec![0.0; f.len()];
        let mut acc = 0.0;
        for e in 0..self.rule.num_elements() {
            let (_, w) = self.rule.element(e);
            let fe = &f[e * m..(e + 1) * m];
            let half = w.iter().sum::<f64>() / 2.0;
            for i in 0..m {
                out[e * m + i] = acc + half * self.left[i].iter().zip(fe).map(|(l, v)| l * v).sum::<f64>();
            }
            acc += w.iter().zip(fe).map(|(w, v)| w * v).sum::<f64>();
        }
        out
    }

    /// `∫_x^b f`, exact for the piecewise interpolant of the samples.
    pub fn integrate_right(&self, f: &[f64]) -> Vec<f64> {
        let m = GRID_NODES;
        let mut out = vec![0.0; f.len()];
        let mut acc = 0.0;
        for e in (0..self.rule.num_elements()).rev() {
            let (_, w) = self.rule.element(e);
            let fe = &f[e * m..(e + 1) * m];
            let half = w.iter().sum::<f64>() / 2.0;
            for i in 0..m {
                out[e * m + i] = acc + half * self.right[i].iter().zip(fe).map(|(l, v)| l * v).sum::<f64>();
            }
            acc += w.iter().zip(fe).map(|(w, v)| w * v).sum::<f64>();
        }
        out
    }
}

/// Integral operators of the function-class representations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelOperator {
    /// `(Kf)(x) = ∫_a^x f`.
    LeftIntegration,
    /// `(K*f)(x) = ∫_x^b f`.
    RightIntegration,
    /// Periodic Green's operator, `K(x, y) = (y - x)/L - 1/2 + H(x - y)`.
    PeriodicGreen,
    /// `K₁ = (I - Π)K`, `Π` the mean, `K` the left integration.
    NeumannFactor,
}

impl KernelOperator {
    pub fn apply(&self, grid: &FineGrid, f: &[f64]) -> Vec<f64> {
        match self {
            Self::LeftIntegration => grid.integrate_left(f),
            Self::RightIntegration => grid.integrate_right(f),
            Self::PeriodicGreen => {
                let a = grid.a();
                let len = grid.length();
                let total = grid.integral(f);
                let moment = grid.nodes().iter().zip(grid.weights()).zip(f).map(|((x, w), v)| (x - a) * w * v).sum::<f64>();
                let mut out = grid.integrate_left(f);
                for (o, &x) in out.iter_mut().zip(grid.nodes()) {
                    *o += moment / len - ((x - a) / len + 0.5) * total;
                }
                out
            }
            Self::NeumannFactor => {
                let mut out = grid.integrate_left(f);
                let m = grid.mean(&out);
                out.iter_mut().for_each(|v| *v -= m);
                out
            }
        }
    }

    /// The adjoint under the `L2` inner product.
    pub fn apply_adjoint(&self, grid: &FineGrid, f: &[f64]) -> Vec<f64> {
        match self {
            Self::LeftIntegration => grid.integrate_right(f),
            Self::RightIntegration => grid.integrate_left(f),
            Self::PeriodicGreen => Self::PeriodicGreen.apply(grid, f).into_iter().map(|v| -v).collect(),
            Self::NeumannFactor => {
                let m = grid.mean(f);
                let g: Vec<f64> = f.iter().map(|v| v - m).collect();
                grid.integrate_right(&g)
            }
        }
    }
}

/// One factor of an operator product, possibly adjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub op: KernelOperator,
    pub adjoint: bool,
}

/// `T = F_0 F_1 ⋯ F_{r-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorChain {
    pub factors: Vec<Factor>,
}

impl OperatorChain {
    pub fn power(op: KernelOperator, r: usize) -> Self {
        Self { factors: vec![Factor { op, adjoint: false }; r] }
    }

    /// `K K* K ⋯` (`r` factors) when `starts_adjoint` is false, else `K* K K* ⋯`.
    pub fn alternating(op: KernelOperator, r: usize, starts_adjoint: bool) -> Self {
        Self { factors: (0..r).map(|i| Factor { op, adjoint: (i % 2 == 0) == starts_adjoint }).collect() }
    }

    pub fn apply(&self, grid: &FineGrid, f: &[f64]) -> Vec<f64> {
        let mut v = f.to_vec();
        for fac in self.factors.iter().rev() {
            v = if fac.adjoint { fac.op.apply_adjoint(grid, &v) } else { fac.op.apply(grid, &v) };
        }
        v
    }

    pub fn apply_adjoint(&self, grid: &FineGrid, f: &[f64]) -> Vec<f64> {
        let mut v = f.to_vec();
        for fac in &self.factors {
            v = if fac.adjoint { fac.op.apply(grid, &v) } else { fac.op.apply_adjoint(grid, &v) };
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid(m: usize) -> FineGrid {
        FineGrid::new(&BreakSequence::uniform(5, 0.0, 1.0).unwrap(), m).unwrap()
    }

    #[test]
    fn left_integration_of_one() {
        let g = grid(500);
        let f = vec![1.0; g.len()];
        let k = KernelOperator::LeftIntegration.apply(&g, &f);
        let err = k.iter().zip(g.nodes()).map(|(v, x)| (v - x).abs()).fold(0.0, f64::max);
        assert!(err <= 1e-12, "{err}");
    }

    #[test]
    fn periodic_green() {
        let g = grid(2000);
        let one = vec![1.0; g.len()];
        let k1 = KernelOperator::PeriodicGreen.apply(&g, &one);
        assert!(k1.iter().all(|v| v.abs() < 1e-12));
        // u' = f, u periodic with zero mean
        let f = g.sample(|x| (2.0 * PI * x).cos());
        let u = KernelOperator::PeriodicGreen.apply(&g, &f);
        let err = u.iter().zip(g.nodes()).map(|(v, x)| (v - (2.0 * PI * x).sin() / (2.0 * PI)).abs()).fold(0.0, f64::max);
        assert!(err <= 1e-8, "{err}");
    }

    #[test]
    fn grid_size_caps() {
        let b = BreakSequence::uniform(5, 0.0, 1.0).unwrap();
        assert!(FineGrid::new(&b, 100).is_err());
        assert!(FineGrid::new(&b, 2 * MAX_GRID + 1).is_err());
        assert!(grid(500).len() >= 500);
    }
}
