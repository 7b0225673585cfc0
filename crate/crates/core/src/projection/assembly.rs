//! Element-by-element assembly of Gram matrices, load vectors and spline samples.

use super::functions::FunctionSpec;
use crate::error::{Error, Result};
use crate::knots::ExtendedKnotVector;
use crate::numerics::{Mat, QuadratureRule, MAX_GAUSS_NODES};
use crate::space::SplineSpace;

/// Gauss nodes per element used for load vectors and error norms.
pub fn oversampled_nodes(p: usize) -> usize {
    (p + 10).min(MAX_GAUSS_NODES)
}

/// Raw local derivative values of the `p + 1` active B-splines at each node
/// of element `e`: `(first, vals[g][j])`.
pub(crate) fn element_table(kv: &ExtendedKnotVector, e: usize, nodes: &[f64], deriv: usize) -> (usize, Vec<Vec<f64>>) {
    let mut first = 0;
    let vals = nodes
        .iter()
        .map(|&x| {
            let (f, v) = kv.eval_on_element(e, x, deriv);
            first = f;
            v
        })
        .collect();
    (first, vals)
}

/// Raw Gram matrix `(∂^q N_i, ∂^q N_j)` with `m` nodes per element.
pub fn raw_gram(kv: &ExtendedKnotVector, q: usize, m: usize) -> Result<Mat> {
    let rule = QuadratureRule::composite(kv.breaks(), m)?;
    let n = kv.dim();
    let mut g = Mat::zeros(n, n);
    for e in 0..rule.num_elements() {
        let (nodes, weights) = rule.element(e);
        let (first, vals) = element_table(kv, e, nodes, q);
        for (v, &w) in vals.iter().zip(weights) {
            for (a, &va) in v.iter().enumerate() {
                if va == 0.0 {
                    continue;
                }
                for (b, &vb) in v.iter().enumerate() {
                    g[(first + a, first + b)] += w * va * vb;
                }
            }
        }
    }
    g.symmetrize();
    Ok(g)
}

/// `(∂^q b_i, ∂^q b_j)` over the space basis, exact up to rounding.
pub fn gram_matrix(space: &SplineSpace, q: usize) -> Result<Mat> {
    let p = space.degree();
    if q > p {
        return Err(Error::DerivativeOrder { order: q, max: p });
    }
    let raw = raw_gram(space.knotvec(), q, p + 1)?;
    if space.is_full() {
        return Ok(raw);
    }
    Ok(space.basis_map().congruence(&raw))
}

/// Raw load vector `(∂^order u, ∂^deriv N_i)` with the oversampled rule.
pub fn raw_load(kv: &ExtendedKnotVector, u: &FunctionSpec, order: usize, deriv: usize) -> Result<Vec<f64>> {
    if order > u.r_max() {
        return Err(Error::DerivativeOrder { order, max: u.r_max() });
    }
    let rule = QuadratureRule::composite(kv.breaks(), oversampled_nodes(kv.degree()))?;
    let mut f = vec![0.0; kv.dim()];
    for e in 0..rule.num_elements() {
        let (nodes, weights) = rule.element(e);
        let (first, vals) = element_table(kv, e, nodes, deriv);
        for ((v, &w), &x) in vals.iter().zip(weights).zip(nodes) {
            let ux = w * u.value(x, order);
            for (a, &va) in v.iter().enumerate() {
                f[first + a] += ux * va;
            }
        }
    }
    Ok(f)
}

/// `(∂^q u, ∂^q b_i)` over the space basis.
pub fn load_vector(space: &SplineSpace, u: &FunctionSpec, q: usize) -> Result<Vec<f64>> {
    let raw = raw_load(space.knotvec(), u, q, q)?;
    Ok(reduce(space, &raw))
}

/// `∫ b_i` for every basis function.
pub fn basis_integrals(space: &SplineSpace) -> Vec<f64> {
    let kv = space.knotvec();
    let t = kv.knots();
    let p = kv.degree();
    let raw: Vec<f64> = (0..kv.dim()).map(|i| (t[i + p + 1] - t[i]) / (p + 1) as f64).collect();
    reduce(space, &raw)
}

pub(crate) fn reduce(space: &SplineSpace, raw: &[f64]) -> Vec<f64> {
    if space.is_full() {
        raw.to_vec()
    } else {
        space.basis_map().matvec(raw)
    }
}

/// `∂^deriv s` at every node of `rule` (whose breaks must match `kv`).
pub fn spline_samples(kv: &ExtendedKnotVector, raw: &[f64], rule: &QuadratureRule, deriv: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(rule.len());
    for e in 0..rule.num_elements() {
        let (nodes, _) = rule.element(e);
        for &x in nodes {
            let (first, v) = kv.eval_on_element(e, x, deriv);
            out.push(v.iter().zip(&raw[first..]).map(|(a, b)| a * b).sum());
        }
    }
    out
}

/// Values of every basis function (rows) at the nodes of `rule` (columns).
pub fn basis_samples(space: &SplineSpace, rule: &QuadratureRule, deriv: usize) -> Mat {
    let kv = space.knotvec();
    let mut raw = Mat::zeros(kv.dim(), rule.len());
    let mut col = 0;
    for e in 0..rule.num_elements() {
        let (nodes, _) = rule.element(e);
        for &x in nodes {
            let (first, v) = kv.eval_on_element(e, x, deriv);
            for (j, val) in v.into_iter().enumerate() {
                raw[(first + j, col)] = val;
            }
            col += 1;
        }
    }
    if space.is_full() {
        raw
    } else {
        space.basis_map().matmul(&raw)
    }
}
