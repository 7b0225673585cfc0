//! Galerkin eigenvalue experiments for the periodic Laplacian and inverse
//! inequality checks.

use crate::error::{Error, Result};
use crate::knots::BreakSequence;
use crate::numerics::{gen_sym_eig, SymEigResult};
use crate::projection::gram_matrix;
use crate::space::{ConstraintFamily, SpaceSpec, SplineSpace};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

mod branches;
mod eigfunctions;
mod inverse;

pub use branches::{branch_profile, count_branches, BranchProfile};
pub use eigfunctions::{
    conjecture_explorer, galerkin_eigfunction_error, ConjectureReport, ConjectureRow, EigfunctionError, ORTHOGONALITY_TOL,
};
pub use inverse::{inverse_report, is_conforming, InverseInequalityReport};

/// Exact periodic Laplacian eigenvalues on an interval of length `len`:
/// `ν_0 = 0`, `ν_{2i-1} = ν_{2i} = (2πi/len)²`.
pub fn exact_periodic_eigenvalue(j: usize, len: f64) -> f64 {
    let i = j.div_ceil(2) as f64;
    (2.0 * PI * i / len).powi(2)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub space: SpaceSpec,
    /// Discrete eigenvalues `ν_j^h`, ascending.
    pub values: Vec<f64>,
    /// Exact `ν_j`, paired by index.
    pub exact: Vec<f64>,
    /// `ν_j^h / ν_j - 1` for `j ≥ 1`; `None` at `j = 0`.
    pub rel_err: Vec<Option<f64>>,
}

impl SpectrumResult {
    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

fn periodic_pencil(space: &SplineSpace) -> Result<SymEigResult> {
    match space.family() {
        ConstraintFamily::Periodic(m) if m >= 1 => {}
        f => {
            return Err(Error::InvalidSpace(format!(
                "the periodic Laplacian needs a periodic family, got {}",
                f.name()
            )))
        }
    }
    if space.degree() == 0 {
        return Err(Error::InvalidSpace("the stiffness form needs p >= 1".into()));
    }
    let k = gram_matrix(space, 1)?;
    let m = gram_matrix(space, 0)?;
    gen_sym_eig(&k, &m)
}

/// Galerkin eigenvalues of `-u'' = νu` with periodic conditions on `space`.
pub fn laplace_spectrum(space: &SplineSpace) -> Result<SpectrumResult> {
    let eig = periodic_pencil(space)?;
    Ok(spectrum_from_values(space, eig.values))
}

fn spectrum_from_values(space: &SplineSpace, values: Vec<f64>) -> SpectrumResult {
    let len = space.breaks().length();
    let exact: Vec<f64> = (0..values.len()).map(|j| exact_periodic_eigenvalue(j, len)).collect();
    let rel_err = values
        .iter()
        .zip(&exact)
        .enumerate()
        .map(|(j, (v, e))| if j == 0 { None } else { Some(v / e - 1.0) })
        .collect();
    SpectrumResult { space: space.spec(), values, exact, rel_err }
}

/// The space of Eq. (4.11): maximal smoothness, `∂^α` periodic for `α ≤ k`.
pub fn outlier_space(n: usize, p: usize, k: usize) -> Result<SplineSpace> {
    if k >= p {
        return Err(Error::InvalidSpace(format!("need 0 <= k <= p - 1 (p = {p}, k = {k})")));
    }
    let b = BreakSequence::uniform(n, 0.0, 1.0)?;
    SplineSpace::maximal(&b, p, ConstraintFamily::Periodic(k + 1))
}

/// The `C^k` periodic space of Eq. (4.12), of dimension `n(p - k)`.
pub fn branch_space(n: usize, p: usize, k: usize) -> Result<SplineSpace> {
    if k >= p {
        return Err(Error::InvalidSpace(format!("need 0 <= k <= p - 1 (p = {p}, k = {k})")));
    }
    let b = BreakSequence::uniform(n, 0.0, 1.0)?;
    SplineSpace::new(&b, p, k as i32, ConstraintFamily::Periodic(k + 1))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutlierReport {
    pub n: usize,
    pub p: usize,
    pub k: usize,
    pub dim: usize,
    pub threshold: f64,
    pub outliers: usize,
    /// `p - k - 1`.
    pub expected: usize,
    pub spectrum: SpectrumResult,
}

/// Counts discrete eigenvalues whose relative error exceeds `threshold`.
pub fn outlier_report(n: usize, p: usize, k: usize, threshold: f64) -> Result<OutlierReport> {
    let space = outlier_space(n, p, k)?;
    let spectrum = laplace_spectrum(&space)?;
    let outliers = spectrum.rel_err.iter().flatten().filter(|e| e.abs() > threshold).count();
    Ok(OutlierReport { n, p, k, dim: space.dim(), threshold, outliers, expected: p - k - 1, spectrum })
}
