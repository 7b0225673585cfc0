//! Symmetric eigensolvers: cyclic Jacobi, Cholesky-reduced generalized
//! problems, and power iteration for the dominant eigenvalue of an operator.

use super::linalg::{check_symmetric, Cholesky};
use super::matrix::{dot, norm2, Mat};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const JACOBI_REL_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with matching eigenvector columns.
#[derive(Debug, Clone)]
pub struct SymEigResult {
    pub values: Vec<f64>,
    /// Column `j` is the eigenvector of `values[j]`.
    pub vectors: Mat,
    /// Present for generalized problems: the eigenvectors are `B`-orthonormal.
    pub mass: Option<Mat>,
}

impl SymEigResult {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn vector(&self, j: usize) -> Vec<f64> {
        self.vectors.col(j)
    }

    pub fn max_value(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }
}

fn off_diagonal_norm(a: &Mat) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix.
///
/// Sweeps until the off-diagonal Frobenius norm drops below `1e-12 ‖A‖_F`,
/// then runs one more sweep; convergence is quadratic, so the extra sweep
/// takes the residual to rounding level.
pub fn sym_eig(a: &Mat) -> Result<SymEigResult> {
    check_symmetric(a)?;
    let n = a.rows();
    let mut m = a.clone();
    m.symmetrize();
    // Rows of `vt` are eigenvectors (contiguous updates); transposed on exit.
    let mut vt = Mat::identity(n);
    let anorm = m.frobenius_norm();
    if n <= 1 || anorm == 0.0 {
        return Ok(SymEigResult { values: (0..n).map(|i| m[(i, i)]).collect(), vectors: vt, mass: None });
    }
    let mut converged_sweeps = 0;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&m) <= JACOBI_REL_TOL * anorm {
            converged_sweeps += 1;
            if converged_sweeps > 1 {
                break;
            }
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = m[(p, p)];
                let aqq = m[(q, q)];
                if (app.abs() + 1e3 * apq.abs() == app.abs()) && (aqq.abs() + 1e3 * apq.abs() == aqq.abs()) {
                    m[(p, q)] = 0.0;
                    m[(q, p)] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // rows p and q
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = m[(p, k)];
                    let akq = m[(q, k)];
                    let np = c * akp - s * akq;
                    let nq = s * akp + c * akq;
                    m[(p, k)] = np;
                    m[(q, k)] = nq;
                    m[(k, p)] = np;
                    m[(k, q)] = nq;
                }
                m[(p, p)] = app - t * apq;
                m[(q, q)] = aqq + t * apq;
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;
                let (vp, vq) = vt.two_rows_mut(p, q);
                for (x, y) in vp.iter_mut().zip(vq.iter_mut()) {
                    let a = *x;
                    let b = *y;
                    *x = c * a - s * b;
                    *y = s * a + c * b;
                }
            }
        }
    }
    if off_diagonal_norm(&m) > JACOBI_REL_TOL * anorm {
        return Err(Error::NoConvergence(format!("Jacobi eigensolver after {JACOBI_MAX_SWEEPS} sweeps")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = Mat::from_fn(n, n, |r, c| vt[(order[c], r)]);
    Ok(SymEigResult { values, vectors, mass: None })
}

/// Generalized symmetric-definite problem `A v = λ B v`, reduced through the
/// Cholesky factor of `B`. Eigenvectors are `B`-orthonormal.
pub fn gen_sym_eig(a: &Mat, b: &Mat) -> Result<SymEigResult> {
    check_symmetric(a)?;
    if a.rows() != b.rows() {
        return Err(Error::Dimension(format!("A is {}x{}, B is {}x{}", a.rows(), a.cols(), b.rows(), b.cols())));
    }
    let chol = Cholesky::factor(b)?;
    let n = a.rows();
    // X = L⁻¹ A, then C = L⁻¹ Xᵀ = L⁻¹ A L⁻ᵀ.
    let mut x = Mat::zeros(n, n);
    for j in 0..n {
        let col = chol.forward(&a.col(j));
        for i in 0..n {
            x[(i, j)] = col[i];
        }
    }
    let mut c = Mat::zeros(n, n);
    for j in 0..n {
        let col = chol.forward(x.row(j));
        for i in 0..n {
            c[(i, j)] = col[i];
        }
    }
    c.symmetrize();
    let eig = sym_eig(&c)?;
    let mut vectors = Mat::zeros(n, n);
    for j in 0..n {
        let v = chol.backward(&eig.vectors.col(j));
        for i in 0..n {
            vectors[(i, j)] = v[i];
        }
    }
    Ok(SymEigResult { values: eig.values, vectors, mass: Some(b.clone()) })
}

/// Outcome of [`power_iteration`].
#[derive(Debug, Clone)]
pub struct PowerIteration {
    pub value: f64,
    pub vector: Vec<f64>,
    pub iterations: usize,
    /// False when `max_iter` was reached before the tolerance was met.
    pub converged: bool,
}

/// Dominant eigenvalue of a symmetric positive semi-definite linear map.
///
/// Stops when successive Rayleigh quotients differ by less than `tol`
/// relative. The start vector is pseudo-random from `seed`; if the iterate
/// collapses to zero the iteration restarts from a fresh seeded vector.
pub fn power_iteration(
    mut apply: impl FnMut(&[f64]) -> Vec<f64>,
    dim: usize,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> PowerIteration {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fresh = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = norm2(&v);
        v.into_iter().map(|x| x / n).collect()
    };
    let mut v = fresh(&mut rng);
    let mut prev = f64::NAN;
    let mut restarts = 0;
    for it in 1..=max_iter {
        let w = apply(&v);
        let rq = dot(&v, &w);
        let wn = norm2(&w);
        if wn == 0.0 || !wn.is_finite() {
            if restarts < 3 {
                restarts += 1;
                v = fresh(&mut rng);
                continue;
            }
            return PowerIteration { value: 0.0, vector: v, iterations: it, converged: wn == 0.0 };
        }
        v = w.into_iter().map(|x| x / wn).collect();
        if prev.is_finite() && (rq - prev).abs() <= tol * rq.abs() {
            return PowerIteration { value: rq, vector: v, iterations: it, converged: true };
        }
        prev = rq;
    }
    PowerIteration { value: prev, vector: v, iterations: max_iter, converged: false }
}
