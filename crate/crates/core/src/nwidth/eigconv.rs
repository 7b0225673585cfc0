//! Convergence in `p` of spline spaces to Laplacian eigenfunctions, and the
//! spectrum of `KK*` for the periodic Green's operator.

use super::grid::{FineGrid, KernelOperator, OperatorChain};
use crate::error::{Error, Result};
use crate::knots::{make_special_breaks, BreakSequence, MAX_DEGREE};
use crate::numerics::{max_principal_angle, sym_eig, w_orthonormalize, weighted_dot, Mat};
use crate::projection::{derivative_norm, error_norm, project, FunctionSpec, ProjectorKind};
use crate::space::{ConstraintFamily, SplineSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Errors below this are treated as exact.
pub const ROUNDING_FLOOR: f64 = 1e-10;

/// `S_{p,i}`: the family `i` space on the special breaks `τ_{p,i}`, of dimension `n`.
pub fn optimal_space(i: usize, n: usize, p: usize) -> Result<SplineSpace> {
    let b = make_special_breaks(p, i, n)?;
    SplineSpace::maximal(&b, p, ConstraintFamily::optimal(i)?)
}

/// `j`-th eigenfunction (`j ≥ 1`) of `-u''` on (0, 1) with the boundary
/// conditions of family `i`: `sin(jπx)`, `cos((j-1)πx)`, `sin((j-1/2)πx)`.
pub fn optimal_eigenfunction(i: usize, j: usize) -> Result<FunctionSpec> {
    if j == 0 {
        return Err(Error::Invalid("eigenfunction index starts at 1".into()));
    }
    match i {
        0 => FunctionSpec::by_name(&format!("sin_{j}")),
        1 => FunctionSpec::by_name(&format!("cos_{}", j - 1)),
        2 => Ok(FunctionSpec::sine(format!("sin_{}.5", j - 1), (j as f64 - 0.5) * PI, 0.0)),
        _ => Err(Error::InvalidSpace(format!("optimal family index must be 0, 1 or 2, got {i}"))),
    }
}

fn check_degrees(degrees: &[usize], min: usize) -> Result<()> {
    if degrees.is_empty() {
        return Err(Error::Invalid("degree list is empty".into()));
    }
    if let Some(&p) = degrees.iter().find(|&&p| p < min || p > MAX_DEGREE) {
        return Err(Error::Invalid(format!("degree {p} outside {min}..={MAX_DEGREE}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigconvReport {
    pub i: usize,
    pub n: usize,
    pub degrees: Vec<usize>,
    /// `errors[j - 1][k] = ‖(I - P_{p,i})ψ_j‖ / ‖ψ_j‖` at `p = degrees[k]`.
    pub errors: Vec<Vec<f64>>,
}

impl EigconvReport {
    /// Errors strictly decrease between consecutive listed degrees of the same
    /// parity (the special breaks depend on the parity of `p`). Entries at
    /// rounding level (below [`ROUNDING_FLOOR`]) are exempt.
    pub fn decreasing_by_parity(&self) -> bool {
        let floor = ROUNDING_FLOOR;
        self.errors.iter().all(|row| {
            (0..self.degrees.len()).all(|a| {
                let next = (a + 1..self.degrees.len()).find(|&b| self.degrees[b] % 2 == self.degrees[a] % 2);
                next.is_none_or(|b| row[b] < row[a] || row[b].max(row[a]) <= floor)
            })
        })
    }

    /// Largest error at the highest listed degree.
    pub fn max_at_top(&self) -> f64 {
        let last = self.degrees.len() - 1;
        self.errors.iter().map(|row| row[last]).fold(0.0, f64::max)
    }
}

/// Relative `L2` projection errors of the first `n` eigenfunctions onto `S_{p,i}`.
pub fn eigconv_report(i: usize, n: usize, degrees: &[usize]) -> Result<EigconvReport> {
    check_degrees(degrees, 1)?;
    let spaces: Vec<SplineSpace> = degrees.iter().map(|&p| optimal_space(i, n, p)).collect::<Result<_>>()?;
    let mut errors = Vec::with_capacity(n);
    for j in 1..=n {
        let u = optimal_eigenfunction(i, j)?;
        let row = spaces
            .iter()
            .map(|s| {
                let c = project(s, &u, ProjectorKind::L2)?.coeffs;
                Ok(error_norm(s, &u, &c, 0)? / derivative_norm(s, &u, 0)?)
            })
            .collect::<Result<Vec<f64>>>()?;
        errors.push(row);
    }
    Ok(EigconvReport { i, n, degrees: degrees.to_vec(), errors })
}

/// Orthonormal periodic eigenfunction `ψ_j` on (0, 1): `1`, `√2 sin(2πix)`
/// for `j = 2i - 1`, `√2 cos(2πix)` for `j = 2i`.
pub fn periodic_eigenfunction(j: usize) -> FunctionSpec {
    let i = j.div_ceil(2);
    if j == 0 {
        FunctionSpec::sine("psi_0", 0.0, PI / 2.0)
    } else if j % 2 == 1 {
        FunctionSpec::sine("", 2.0 * PI * i as f64, 0.0).scaled(format!("psi_{j}"), 2f64.sqrt())
    } else {
        FunctionSpec::sine("", 2.0 * PI * i as f64, PI / 2.0).scaled(format!("psi_{j}"), 2f64.sqrt())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PeriodicEigconvReport {
    pub n: usize,
    pub q: usize,
    pub l: usize,
    pub degrees: Vec<usize>,
    /// Modes `j` with `2⌈j/2⌉h < 1`.
    pub modes: Vec<usize>,
    /// `errors[m][k] = ‖∂^ℓ(ψ_j - Q_p^q ψ_j)‖`, `j = modes[m]`, `p = degrees[k]`.
    pub errors: Vec<Vec<f64>>,
    /// `(2⌈j/2⌉h)^{p+1-ℓ}`.
    pub bounds: Vec<Vec<f64>>,
}

impl PeriodicEigconvReport {
    /// Every error is below its bound; for `j = 0` the bound is zero and the
    /// error must be at rounding level.
    pub fn within_bounds(&self) -> bool {
        self.modes.iter().zip(self.errors.iter().zip(&self.bounds)).all(|(&j, (er, br))| {
            er.iter().zip(br).all(|(e, b)| *e <= *b || (j == 0 && *e <= ROUNDING_FLOOR))
        })
    }

    /// Strict decrease along the listed degrees for every `j ≥ 1`.
    pub fn strictly_decreasing(&self) -> bool {
        self.modes.iter().zip(&self.errors).filter(|(j, _)| **j > 0).all(|(_, row)| row.windows(2).all(|w| w[1] < w[0]))
    }
}

/// Corollary-4.1 table for the uniform periodic space on (0, 1) with `n` intervals.
pub fn periodic_eigconv(n: usize, q: usize, l: usize, degrees: &[usize]) -> Result<PeriodicEigconvReport> {
    check_degrees(degrees, 1)?;
    if l > q {
        return Err(Error::Hypothesis(format!("need l <= q (l = {l}, q = {q})")));
    }
    let breaks = BreakSequence::uniform(n, 0.0, 1.0)?;
    let h = breaks.h();
    let modes: Vec<usize> = (0..).take_while(|&j: &usize| 2.0 * j.div_ceil(2) as f64 * h < 1.0).collect();
    let kind = if q == 0 { ProjectorKind::L2 } else { ProjectorKind::RitzRecursive(q) };
    let mut errors = Vec::new();
    let mut bounds = Vec::new();
    for &j in &modes {
        let u = periodic_eigenfunction(j);
        let mut erow = Vec::new();
        let mut brow = Vec::new();
        for &p in degrees {
            if p < q || p + l + 1 < 2 * q {
                return Err(Error::Hypothesis(format!("p = {p} violates p >= 2q - l - 1 or p >= q")));
            }
            let s = SplineSpace::periodic(&breaks, p)?;
            let c = project(&s, &u, kind)?.coeffs;
            erow.push(error_norm(&s, &u, &c, l)?);
            brow.push((2.0 * j.div_ceil(2) as f64 * h).powi((p + 1 - l) as i32));
        }
        errors.push(erow);
        bounds.push(brow);
    }
    Ok(PeriodicEigconvReport { n, q, l, degrees: degrees.to_vec(), modes, errors, bounds })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KkStarReport {
    pub nodes: usize,
    /// Leading singular values of `K`, descending.
    pub values: Vec<f64>,
    /// `L / (2π⌈j/2⌉)`, `j = 1, 2, …`.
    pub exact: Vec<f64>,
    pub rel_err: Vec<f64>,
    /// Largest principal angle between each computed pair of left singular
    /// functions and `span{sin(2πix/L), cos(2πix/L)}`.
    pub angles: Vec<f64>,
    pub iterations: usize,
}

impl KkStarReport {
    pub fn max_rel_err(&self) -> f64 {
        self.rel_err.iter().fold(0.0, |a, b| a.max(b.abs()))
    }

    pub fn max_angle(&self) -> f64 {
        self.angles.iter().fold(0.0, |a, &b| a.max(b))
    }
}

/// Top `count` eigenpairs of `KK*` for the periodic Green's operator by block
/// subspace iteration with Rayleigh–Ritz in the quadrature inner product.
pub fn kkstar_spectrum_check(breaks: &BreakSequence, count: usize, m: usize) -> Result<KkStarReport> {
    if count == 0 || count % 2 == 1 {
        return Err(Error::Invalid(format!("count must be a positive even number, got {count}")));
    }
    let grid = FineGrid::new(breaks, m)?;
    let w = grid.weights().to_vec();
    let k = OperatorChain::power(KernelOperator::PeriodicGreen, 1);
    let apply = |f: &[f64]| k.apply(&grid, &k.apply_adjoint(&grid, f));
    let block = count + 4;
    let mut rng = ChaCha8Rng::seed_from_u64(0xb10c);
    let mut x: Vec<Vec<f64>> = (0..block).map(|_| (0..grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
    w_orthonormalize(&w, &mut x)?;
    let mut prev = vec![f64::INFINITY; count];
    let mut values = Vec::new();
    let mut iterations = 0;
    for it in 1..=500 {
        iterations = it;
        let mut y: Vec<Vec<f64>> = x.iter().map(|v| apply(v)).collect();
        w_orthonormalize(&w, &mut y)?;
        let ay: Vec<Vec<f64>> = y.iter().map(|v| apply(v)).collect();
        let mut h = Mat::from_fn(block, block, |a, b| weighted_dot(&w, &y[a], &ay[b]));
        h.symmetrize();
        let eig = sym_eig(&h)?;
        // descending Ritz pairs
        x = (0..block)
            .rev()
            .map(|c| {
                let col = eig.vector(c);
                (0..grid.len()).map(|t| y.iter().zip(&col).map(|(v, a)| a * v[t]).sum()).collect()
            })
            .collect();
        values = eig.values.iter().rev().take(count).cloned().collect();
        let change = values.iter().zip(&prev).map(|(a, b)| ((a - b) / a).abs()).fold(0.0, f64::max);
        prev = values.clone();
        if change < 1e-13 {
            break;
        }
    }
    let len = grid.length();
    let a = grid.a();
    let sv: Vec<f64> = values.iter().map(|v| v.max(0.0).sqrt()).collect();
    let exact: Vec<f64> = (1..=count).map(|j| len / (2.0 * PI * j.div_ceil(2) as f64)).collect();
    let rel_err = sv.iter().zip(&exact).map(|(s, e)| s / e - 1.0).collect();
    let mut angles = Vec::new();
    for pair in 0..count / 2 {
        let omega = 2.0 * PI * (pair + 1) as f64 / len;
        let mut ex = vec![grid.sample(|t| (omega * (t - a)).sin()), grid.sample(|t| (omega * (t - a)).cos())];
        w_orthonormalize(&w, &mut ex)?;
        let computed = vec![x[2 * pair].clone(), x[2 * pair + 1].clone()];
        angles.push(max_principal_angle(&w, &computed, &ex)?);
    }
    Ok(KkStarReport { nodes: grid.len(), values: sv, exact, rel_err, angles, iterations })
}

/// Max deviation of `K₁K₁* cos(πx)` from `cos(πx)/π²` on (0, 1), relative to `1/π²`.
pub fn neumann_green_residual(m: usize) -> Result<f64> {
    let grid = FineGrid::new(&BreakSequence::uniform(1, 0.0, 1.0)?, m)?;
    let f = grid.sample(|x| (PI * x).cos());
    let k1 = KernelOperator::NeumannFactor;
    let u = k1.apply(&grid, &k1.apply_adjoint(&grid, &f));
    let scale = 1.0 / (PI * PI);
    Ok(u.iter().zip(&f).map(|(a, b)| (a - b * scale).abs()).fold(0.0, f64::max) / scale)
}
