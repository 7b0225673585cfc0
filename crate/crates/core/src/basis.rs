//! Raw B-spline evaluation over an extended knot vector, endpoint
//! functionals, and coefficient-level integration/differentiation.

use crate::error::{Error, Result};
use crate::knots::ExtendedKnotVector;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum End {
    Left,
    Right,
}

/// Derivatives `0..=nd` of the `p + 1` B-splines that are nonzero on the knot
/// span `span`, evaluated at `x` (de Boor's derivative algorithm).
///
/// `out[k][j]` is the `k`-th derivative of `N_{span-p+j}`.
pub fn nonzero_derivatives(knots: &[f64], p: usize, span: usize, x: f64, nd: usize) -> Vec<Vec<f64>> {
    let mut ndu = vec![vec![0.0; p + 1]; p + 1];
    let mut left = vec![0.0; p + 1];
    let mut right = vec![0.0; p + 1];
    ndu[0][0] = 1.0;
    for j in 1..=p {
        left[j] = x - knots[span + 1 - j];
        right[j] = knots[span + j] - x;
        let mut saved = 0.0;
        for r in 0..j {
            ndu[j][r] = right[r + 1] + left[j - r];
            let temp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu[j][j] = saved;
    }
    let mut ders = vec![vec![0.0; p + 1]; nd + 1];
    for j in 0..=p {
        ders[0][j] = ndu[j][p];
    }
    let nk = nd.min(p);
    let mut a = [vec![0.0; p + 1], vec![0.0; p + 1]];
    let pi = p as isize;
    for r in 0..=p {
        let ri = r as isize;
        let (mut s1, mut s2) = (0usize, 1usize);
        a[0].iter_mut().for_each(|v| *v = 0.0);
        a[0][0] = 1.0;
        for k in 1..=nk {
            let ki = k as isize;
            let mut d = 0.0;
            let rk = ri - ki;
            let pk = pi - ki;
            if r >= k {
                a[s2][0] = a[s1][0] / ndu[(pk + 1) as usize][rk as usize];
                d = a[s2][0] * ndu[rk as usize][pk as usize];
            }
            let j1 = if rk >= -1 { 1 } else { -rk };
            let j2 = if ri - 1 <= pk { ki - 1 } else { pi - ri };
            for j in j1..=j2 {
                let ju = j as usize;
                let v = (a[s1][ju] - a[s1][ju - 1]) / ndu[(pk + 1) as usize][(rk + j) as usize];
                a[s2][ju] = v;
                d += v * ndu[(rk + j) as usize][pk as usize];
            }
            if ri <= pk {
                a[s2][k] = -a[s1][k - 1] / ndu[(pk + 1) as usize][r];
                d += a[s2][k] * ndu[r][pk as usize];
            }
            ders[k][r] = d;
            std::mem::swap(&mut s1, &mut s2);
        }
    }
    let mut fac = p as f64;
    for k in 1..=nk {
        for v in ders[k].iter_mut() {
            *v *= fac;
        }
        fac *= (p - k) as f64;
    }
    ders
}

impl ExtendedKnotVector {
    /// `(first, values)`: `values[j]` is the `deriv`-th derivative of raw
    /// B-spline `first + j` at `x`, for the `p + 1` splines supported on the
    /// element containing `x`. Interior breaks use the right element, `x = b`
    /// the last element (left limit).
    pub fn eval_nonzero(&self, x: f64, deriv: usize) -> Result<(usize, Vec<f64>)> {
        let e = self.breaks().locate(x)?;
        Ok(self.eval_on_element(e, x, deriv))
    }

    /// As [`eval_nonzero`](Self::eval_nonzero) with the element fixed; `x` may
    /// be any point of the closed element, giving one-sided limits at its ends.
    pub fn eval_on_element(&self, e: usize, x: f64, deriv: usize) -> (usize, Vec<f64>) {
        let p = self.degree();
        let span = self.span(e);
        let mut ders = nonzero_derivatives(self.knots(), p, span, x, deriv);
        (span - p, ders.swap_remove(deriv))
    }

    /// All raw basis values (length `dim`).
    pub fn eval_raw(&self, x: f64, deriv: usize) -> Result<Vec<f64>> {
        let (first, vals) = self.eval_nonzero(x, deriv)?;
        let mut out = vec![0.0; self.dim()];
        out[first..first + vals.len()].copy_from_slice(&vals);
        Ok(out)
    }

    /// Evaluates `∂^deriv Σ c_i N_i` at `x`.
    pub fn eval_coeffs(&self, coeffs: &[f64], x: f64, deriv: usize) -> Result<f64> {
        let (first, vals) = self.eval_nonzero(x, deriv)?;
        Ok(vals.iter().zip(&coeffs[first..]).map(|(v, c)| v * c).sum())
    }
}

/// Row vector `ℓ` with `ℓ · c = ∂^α s(end)` for raw coefficients `c`
/// (one-sided limit from inside the interval).
pub fn endpoint_functional(kv: &ExtendedKnotVector, alpha: usize, end: End) -> Result<Vec<f64>> {
    if alpha > kv.degree() {
        return Err(Error::DerivativeOrder { order: alpha, max: kv.degree() });
    }
    let x = match end {
        End::Left => kv.breaks().a(),
        End::Right => kv.breaks().b(),
    };
    kv.eval_raw(x, alpha)
}

/// Raw coefficients of `x ↦ ∫_a^x s` in the integrated knot vector
/// (degree `p + 1`, smoothness `k + 1`).
pub fn antidifferentiate(kv: &ExtendedKnotVector, coeffs: &[f64]) -> Result<(ExtendedKnotVector, Vec<f64>)> {
    check_len(kv, coeffs)?;
    let up = kv.integrated()?;
    let t = kv.knots();
    let p1 = (kv.degree() + 1) as f64;
    let mut out = Vec::with_capacity(coeffs.len() + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for (i, c) in coeffs.iter().enumerate() {
        acc += c * (t[i + kv.degree() + 1] - t[i]) / p1;
        out.push(acc);
    }
    Ok((up, out))
}

/// Raw coefficients of `s'` in the differentiated knot vector (degree `p - 1`,
/// smoothness `k - 1`). Requires `k ≥ 0`, i.e. a continuous spline.
pub fn differentiate(kv: &ExtendedKnotVector, coeffs: &[f64]) -> Result<(ExtendedKnotVector, Vec<f64>)> {
    check_len(kv, coeffs)?;
    if kv.smoothness() < 0 {
        return Err(Error::InvalidSpace("cannot differentiate a discontinuous spline coefficient-wise".into()));
    }
    let down = kv.differentiated()?;
    let t = kv.knots();
    let p = kv.degree();
    let out = (0..coeffs.len() - 1)
        .map(|i| p as f64 * (coeffs[i + 1] - coeffs[i]) / (t[i + p + 1] - t[i + 1]))
        .collect();
    Ok((down, out))
}

/// `∫_a^b Σ c_i N_i`, from `∫ N_i = (t_{i+p+1} - t_i)/(p+1)`.
pub fn integral(kv: &ExtendedKnotVector, coeffs: &[f64]) -> f64 {
    let t = kv.knots();
    let p = kv.degree();
    coeffs.iter().enumerate().map(|(i, c)| c * (t[i + p + 1] - t[i])).sum::<f64>() / (p + 1) as f64
}

fn check_len(kv: &ExtendedKnotVector, coeffs: &[f64]) -> Result<()> {
    if coeffs.len() != kv.dim() {
        return Err(Error::Dimension(format!(
            "{} coefficients for a knot vector with {} basis functions",
            coeffs.len(),
            kv.dim()
        )));
    }
    Ok(())
}
