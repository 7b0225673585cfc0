//! Dense factorizations: Cholesky, LU with partial pivoting, and a
//! column-pivoted Householder QR used for null-space extraction.

use super::matrix::{dot, Mat};
use crate::error::{Error, Result};

/// Relative asymmetry tolerance accepted by the symmetric routines.
pub const SYMMETRY_TOL: f64 = 1e-12;

pub(crate) fn check_symmetric(a: &Mat) -> Result<()> {
    if !a.is_square() {
        return Err(Error::Dimension(format!("expected square matrix, got {}x{}", a.rows(), a.cols())));
    }
    let norm = a.max_abs();
    let asym = a.max_asymmetry();
    if asym > SYMMETRY_TOL * norm.max(f64::MIN_POSITIVE) {
        return Err(Error::NotSymmetric { asymmetry: asym, norm });
    }
    Ok(())
}

/// Lower-triangular factor `L` with `A = L Lᵀ`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    l: Mat,
}

impl Cholesky {
    pub fn factor(a: &Mat) -> Result<Self> {
        check_symmetric(a)?;
        let n = a.rows();
        let mut l = Mat::zeros(n, n);
        for j in 0..n {
            let s = a[(j, j)] - dot(&l.row(j)[..j], &l.row(j)[..j]);
            if !(s > 0.0) || !s.is_finite() {
                return Err(Error::NotPositiveDefinite { pivot: j });
            }
            let d = s.sqrt();
            l[(j, j)] = d;
            for i in (j + 1)..n {
                let s = a[(i, j)] - dot(&l.row(i)[..j], &l.row(j)[..j]);
                l[(i, j)] = s / d;
            }
        }
        Ok(Self { l })
    }

    pub fn l(&self) -> &Mat {
        &self.l
    }

    pub fn into_l(self) -> Mat {
        self.l
    }

    pub fn dim(&self) -> usize {
        self.l.rows()
    }

    /// Solves `L y = b`.
    pub fn forward(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut y = b.to_vec();
        for i in 0..n {
            let s = dot(&self.l.row(i)[..i], &y[..i]);
            y[i] = (y[i] - s) / self.l[(i, i)];
        }
        y
    }

    /// Solves `Lᵀ x = y`.
    pub fn backward(&self, y: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut x = y.to_vec();
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in (i + 1)..n {
                s -= self.l[(k, i)] * x[k];
            }
            x[i] = s / self.l[(i, i)];
        }
        x
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        self.backward(&self.forward(b))
    }
}

pub fn cholesky(a: &Mat) -> Result<Mat> {
    Cholesky::factor(a).map(Cholesky::into_l)
}

pub fn solve_spd(a: &Mat, rhs: &[f64]) -> Result<Vec<f64>> {
    if rhs.len() != a.rows() {
        return Err(Error::Dimension(format!("rhs length {} vs matrix {}", rhs.len(), a.rows())));
    }
    Ok(Cholesky::factor(a)?.solve(rhs))
}

/// Solves a general square system by Gaussian elimination with partial pivoting.
pub fn solve_lu(a: &Mat, rhs: &[f64]) -> Result<Vec<f64>> {
    if !a.is_square() || rhs.len() != a.rows() {
        return Err(Error::Dimension("solve_lu needs a square matrix and matching rhs".into()));
    }
    let n = a.rows();
    let mut m = a.clone();
    let mut b = rhs.to_vec();
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    for k in 0..n {
        let (piv, pval) = (k..n)
            .map(|i| (i, m[(i, k)].abs()))
            .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if pval <= 1e-14 * scale {
            return Err(Error::Singular { pivot: k });
        }
        if piv != k {
            for j in 0..n {
                let t = m[(k, j)];
                m[(k, j)] = m[(piv, j)];
                m[(piv, j)] = t;
            }
            b.swap(k, piv);
        }
        let d = m[(k, k)];
        for i in (k + 1)..n {
            let f = m[(i, k)] / d;
            if f == 0.0 {
                continue;
            }
            for j in k..n {
                m[(i, j)] -= f * m[(k, j)];
            }
            b[i] -= f * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = ((i + 1)..n).map(|j| m[(i, j)] * x[j]).sum();
        x[i] = (b[i] - s) / m[(i, i)];
    }
    Ok(x)
}

/// Orthonormal basis of the null space of `c` (rows are functionals on `R^n`),
/// returned as rows of a `(n - rank) x n` matrix, together with the rank.
///
/// Each functional is normalized before a column-pivoted Householder QR of
/// `cᵀ`; a pivot counts towards the rank when it exceeds `rel_tol` times the
/// largest pivot.
pub fn null_space(c: &Mat, n: usize, rel_tol: f64) -> (Mat, usize) {
    if c.rows() == 0 {
        return (Mat::identity(n), 0);
    }
    assert_eq!(c.cols(), n);
    // Work on Aᵀ (n x m), columns = normalized functionals.
    let m = c.rows();
    let mut a = Mat::zeros(n, m);
    for j in 0..m {
        let row = c.row(j);
        let nrm = dot(row, row).sqrt();
        if nrm > 0.0 {
            for i in 0..n {
                a[(i, j)] = row[i] / nrm;
            }
        }
    }
    let mut reflectors: Vec<Vec<f64>> = Vec::new();
    let mut col_norms: Vec<f64> = (0..m).map(|j| (0..n).map(|i| a[(i, j)].powi(2)).sum()).collect();
    let mut first_pivot = 0.0;
    let mut rank = 0;
    for k in 0..m.min(n) {
        // Pivot: column with the largest remaining norm.
        let (piv, _) = (k..m)
            .map(|j| (j, col_norms[j]))
            .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if piv != k {
            for i in 0..n {
                let t = a[(i, k)];
                a[(i, k)] = a[(i, piv)];
                a[(i, piv)] = t;
            }
            col_norms.swap(k, piv);
        }
        let x: Vec<f64> = (k..n).map(|i| a[(i, k)]).collect();
        let alpha = dot(&x, &x).sqrt();
        if k == 0 {
            first_pivot = alpha;
        }
        if alpha <= rel_tol * first_pivot || alpha == 0.0 {
            break;
        }
        rank += 1;
        let mut v = x;
        let sign = if v[0] >= 0.0 { 1.0 } else { -1.0 };
        v[0] += sign * alpha;
        let vnorm = dot(&v, &v).sqrt();
        for vi in &mut v {
            *vi /= vnorm;
        }
        for j in k..m {
            let s: f64 = (k..n).map(|i| v[i - k] * a[(i, j)]).sum();
            for i in k..n {
                a[(i, j)] -= 2.0 * v[i - k] * s;
            }
        }
        for j in (k + 1)..m {
            col_norms[j] = ((k + 1)..n).map(|i| a[(i, j)].powi(2)).sum();
        }
        reflectors.push(v);
    }
    // Q = H_0 H_1 ... H_{r-1}; the null space is spanned by columns r..n of Q.
    // Row t of the result = Q e_{rank + t}.
    let dim = n - rank;
    let mut out = Mat::zeros(dim, n);
    for t in 0..dim {
        let mut e = vec![0.0; n];
        e[rank + t] = 1.0;
        for (k, v) in reflectors.iter().enumerate().rev() {
            let s: f64 = (k..n).map(|i| v[i - k] * e[i]).sum();
            for i in k..n {
                e[i] -= 2.0 * v[i - k] * s;
            }
        }
        out.row_mut(t).copy_from_slice(&e);
    }
    (out, rank)
}
