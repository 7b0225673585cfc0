//! Gauss–Legendre rules and composite rules aligned to break points.

use crate::error::{Error, Result};
use crate::knots::BreakSequence;
use std::f64::consts::PI;

pub const MAX_GAUSS_NODES: usize = 64;

/// Nodes and weights on the reference interval [-1, 1], nodes ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Legendre polynomial `P_m(x)` and its derivative by the three-term recurrence.
fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// `m`-point Gauss–Legendre rule, exact for polynomials of degree `2m - 1`.
///
/// Roots of `P_m` are found by Newton iteration from the Chebyshev-like guesses
/// `cos(π(i - 1/4)/(m + 1/2))`.
pub fn gauss_legendre(m: usize) -> Result<GaussRule> {
    if m == 0 || m > MAX_GAUSS_NODES {
        return Err(Error::Invalid(format!(
            "Gauss-Legendre node count must be in 1..={MAX_GAUSS_NODES}, got {m}"
        )));
    }
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let half = m.div_ceil(2);
    for i in 0..half {
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut converged = false;
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(m, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-15 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence(format!(
                "Gauss-Legendre Newton iteration for node {i} of {m}"
            )));
        }
        let (_, d) = legendre_with_derivative(m, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Newton from the largest root downwards; mirror into ascending order.
        nodes[m - 1 - i] = x;
        nodes[i] = -x;
        weights[m - 1 - i] = w;
        weights[i] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    Ok(GaussRule { nodes, weights })
}

/// Composite rule: a Gauss rule mapped onto every interval of a break sequence.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    breaks: BreakSequence,
    nodes_per_element: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn composite(breaks: &BreakSequence, m_per_element: usize) -> Result<Self> {
        let reference = gauss_legendre(m_per_element)?;
        let pts = breaks.points();
        let mut nodes = Vec::with_capacity(breaks.num_intervals() * m_per_element);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for e in pts.windows(2) {
            let (lo, hi) = (e[0], e[1]);
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            for (xi, wi) in reference.nodes.iter().zip(&reference.weights) {
                nodes.push(mid + half * xi);
                weights.push(half * wi);
            }
        }
        Ok(Self { breaks: breaks.clone(), nodes_per_element: m_per_element, nodes, weights })
    }

    pub fn breaks(&self) -> &BreakSequence {
        &self.breaks
    }

    pub fn nodes_per_element(&self) -> usize {
        self.nodes_per_element
    }

    pub fn num_elements(&self) -> usize {
        self.breaks.num_intervals()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node and weight slices of element `e`.
    pub fn element(&self, e: usize) -> (&[f64], &[f64]) {
        let m = self.nodes_per_element;
        (&self.nodes[e * m..(e + 1) * m], &self.weights[e * m..(e + 1) * m])
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Weighted sum over pre-sampled values at the rule's nodes.
    pub fn integrate_samples(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.nodes.len());
        values.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_small_rules() {
        let r1 = gauss_legendre(1).unwrap();
        assert_eq!(r1.nodes, vec![0.0]);
        assert!((r1.weights[0] - 2.0).abs() < 1e-15);

        let r2 = gauss_legendre(2).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!((r2.nodes[0] + s).abs() < 1e-15 && (r2.nodes[1] - s).abs() < 1e-15);
        assert!(r2.weights.iter().all(|w| (w - 1.0).abs() < 1e-15));

        let r3 = gauss_legendre(3).unwrap();
        let s = (0.6f64).sqrt();
        assert!((r3.nodes[0] + s).abs() < 1e-15);
        assert_eq!(r3.nodes[1], 0.0);
        assert!((r3.nodes[2] - s).abs() < 1e-15);
        assert!((r3.weights[0] - 5.0 / 9.0).abs() < 1e-15);
        assert!((r3.weights[1] - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn polynomial_exactness_all_sizes() {
        for m in 1..=MAX_GAUSS_NODES {
            let rule = gauss_legendre(m).unwrap();
            let wsum: f64 = rule.weights.iter().sum();
            assert!((wsum - 2.0).abs() < 1e-13, "m={m} weight sum {wsum}");
            assert!(rule.weights.iter().all(|&w| w > 0.0));
            assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
            // ∫_{-1}^{1} x^d = 2/(d+1) for even d
            for d in (0..2 * m).step_by(2) {
                let approx: f64 =
                    rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * x.powi(d as i32)).sum();
                let exact = 2.0 / (d as f64 + 1.0);
                assert!((approx - exact).abs() < 1e-13, "m={m} d={d}: {approx} vs {exact}");
            }
        }
    }

    #[test]
    fn rejects_bad_counts() {
        assert!(gauss_legendre(0).is_err());
        assert!(gauss_legendre(65).is_err());
    }

    #[test]
    fn composite_integrals() {
        let b = BreakSequence::uniform(7, 0.0, 1.0).unwrap();
        for m in 1..=8 {
            let q = QuadratureRule::composite(&b, m).unwrap();
            assert!((q.integrate(|_| 1.0) - 1.0).abs() < 1e-15);
            let exact = 1.0 / (2.0 * m as f64);
            assert!((q.integrate(|x| x.powi(2 * m as i32 - 1)) - exact).abs() < 1e-14);
            for e in 0..q.num_elements() {
                let (_, w) = q.element(e);
                let len = b.points()[e + 1] - b.points()[e];
                assert!((w.iter().sum::<f64>() - len).abs() <= 1e-14 * len);
            }
        }
        let b16 = BreakSequence::uniform(16, 0.0, 1.0).unwrap();
        let q = QuadratureRule::composite(&b16, 10).unwrap();
        let v = q.integrate(|x| (PI * x).sin());
        assert!((v - 2.0 / PI).abs() < 1e-12);
    }
}
