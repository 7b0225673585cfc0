//! Subspaces of sampled functions under a weighted inner product.

use super::eigen::sym_eig;
use super::matrix::Mat;
use crate::error::{Error, Result};

/// `Σ w_i f_i g_i`.
pub fn weighted_dot(w: &[f64], f: &[f64], g: &[f64]) -> f64 {
    f.iter().zip(g).zip(w).map(|((a, b), w)| a * b * w).sum()
}

/// Modified Gram–Schmidt in the `w`-inner product (applied twice for
/// stability). Fails if the vectors are numerically dependent.
pub fn w_orthonormalize(w: &[f64], vs: &mut [Vec<f64>]) -> Result<()> {
    for i in 0..vs.len() {
        let scale = weighted_dot(w, &vs[i], &vs[i]).sqrt();
        for _ in 0..2 {
            for j in 0..i {
                let (done, rest) = vs.split_at_mut(i);
                let c = weighted_dot(w, &rest[0], &done[j]);
                rest[0].iter_mut().zip(&done[j]).for_each(|(x, y)| *x -= c * y);
            }
        }
        let n = weighted_dot(w, &vs[i], &vs[i]).sqrt();
        if !(n > 1e-12 * scale) {
            return Err(Error::Invalid(format!("vector {i} is linearly dependent on its predecessors")));
        }
        vs[i].iter_mut().for_each(|x| *x /= n);
    }
    Ok(())
}

/// Largest principal angle between `span(a)` and `span(b)`, both given by
/// `w`-orthonormal vectors. Computed from the residual of `a` after
/// projection onto `span(b)`, which keeps small angles accurate.
pub fn max_principal_angle(w: &[f64], a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<f64> {
    let residuals: Vec<Vec<f64>> = a
        .iter()
        .map(|f| {
            let mut r = f.clone();
            for e in b {
                let c = weighted_dot(w, f, e);
                r.iter_mut().zip(e).for_each(|(ri, ei)| *ri -= c * ei);
            }
            r
        })
        .collect();
    let m = a.len();
    let gram = Mat::from_fn(m, m, |i, k| weighted_dot(w, &residuals[i], &residuals[k]));
    let sin2 = sym_eig(&gram)?.max_value().clamp(0.0, 1.0);
    Ok(sin2.sqrt().asin())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planar_angle() {
        let w = [1.0, 1.0, 1.0];
        let t: f64 = 0.3;
        let a = vec![vec![t.cos(), t.sin(), 0.0]];
        let b = vec![vec![1.0, 0.0, 0.0]];
        assert!((max_principal_angle(&w, &a, &b).unwrap() - t).abs() < 1e-14);
        let mut vs = vec![vec![1.0, 1.0, 0.0], vec![1.0, 0.0, 0.0]];
        w_orthonormalize(&w, &mut vs).unwrap();
        assert!(weighted_dot(&w, &vs[0], &vs[1]).abs() < 1e-15);
        let mut dep = vec![vec![1.0, 2.0, 0.0], vec![2.0, 4.0, 0.0]];
        assert!(w_orthonormalize(&w, &mut dep).is_err());
    }
}
