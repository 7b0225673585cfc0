//! Spectral branches of the `C^k` periodic spaces.

use super::{branch_space, periodic_pencil, spectrum_from_values, SpectrumResult};
use crate::error::Result;
use crate::numerics::{Mat, SymEigResult};
use crate::space::SplineSpace;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Sampling offsets inside each element; several so that no mode vanishes
/// at all of them.
const OFFSETS: [f64; 3] = [0.21, 0.5, 0.77];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BranchProfile {
    pub n: usize,
    pub p: usize,
    pub k: usize,
    pub dim: usize,
    /// `(j / dim, ν_j^h / ν_j - 1)` for `j ≥ 1`.
    pub curve: Vec<(f64, f64)>,
    /// Discrete wavenumber `i ∈ [0, n/2]` of every eigenvector.
    pub wavenumbers: Vec<usize>,
    /// First index of every branch after the first.
    pub boundaries: Vec<usize>,
    pub branches: usize,
    /// `p - k`.
    pub expected: usize,
    pub spectrum: SpectrumResult,
}

/// Bloch wavenumber of each eigenvector on a uniform periodic mesh.
///
/// A discrete eigenfunction satisfies `ψ(x + h) = e^{±iθ}ψ(x)` with
/// `θ = 2πi/n`, so its samples at a fixed offset in every element are a pure
/// discrete harmonic of index `i`.
pub fn bloch_wavenumbers(space: &SplineSpace, eig: &SymEigResult) -> Result<Vec<usize>> {
    let b = space.breaks();
    let n = b.num_intervals();
    let pts = b.points();
    let dim = space.dim();
    let mut samples = Mat::zeros(dim, OFFSETS.len() * n);
    for (o, t) in OFFSETS.iter().enumerate() {
        for e in 0..n {
            let x = pts[e] + t * (pts[e + 1] - pts[e]);
            for (i, v) in space.eval_basis(x, 0)?.into_iter().enumerate() {
                samples[(i, o * n + e)] = v;
            }
        }
    }
    let half = n / 2;
    let (cos_t, sin_t): (Vec<f64>, Vec<f64>) = (0..n)
        .map(|m| {
            let a = 2.0 * PI * m as f64 / n as f64;
            (a.cos(), a.sin())
        })
        .unzip();
    let mut out = Vec::with_capacity(eig.len());
    for j in 0..eig.len() {
        let s = samples.tr_matvec(&eig.vector(j));
        let power = |i: usize| -> f64 {
            (0..OFFSETS.len())
                .map(|o| {
                    let (mut re, mut im) = (0.0, 0.0);
                    for e in 0..n {
                        let m = (i * e) % n;
                        re += s[o * n + e] * cos_t[m];
                        im -= s[o * n + e] * sin_t[m];
                    }
                    re * re + im * im
                })
                .sum()
        };
        let best = (0..=half).map(|i| (i, power(i))).fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
        out.push(best.0);
    }
    Ok(out)
}

/// Splits an ascending spectrum into branches along which the wavenumber is
/// monotone. Returns the count and the first index of every later branch.
///
/// At a turning point the wavenumber plateaus (the band edge is shared by
/// both branches); the boundary is placed in the middle of the plateau.
pub fn count_branches(wavenumbers: &[usize]) -> (usize, Vec<usize>) {
    // runs of equal wavenumber: (value, start, length)
    let mut runs: Vec<(usize, usize, usize)> = Vec::new();
    for (j, &w) in wavenumbers.iter().enumerate() {
        match runs.last_mut() {
            Some(r) if r.0 == w => r.2 += 1,
            _ => runs.push((w, j, 1)),
        }
    }
    let boundaries: Vec<usize> = runs
        .windows(3)
        .filter(|r| (r[1].0 > r[0].0) == (r[1].0 > r[2].0))
        .map(|r| r[1].1 + r[1].2 / 2)
        .collect();
    (boundaries.len() + 1, boundaries)
}

/// Error profile and detected branch count of the Eq. (4.12) space.
pub fn branch_profile(n: usize, p: usize, k: usize) -> Result<BranchProfile> {
    let space = branch_space(n, p, k)?;
    let eig = periodic_pencil(&space)?;
    let wavenumbers = bloch_wavenumbers(&space, &eig)?;
    let spectrum = spectrum_from_values(&space, eig.values);
    let dim = space.dim();
    let curve = spectrum
        .rel_err
        .iter()
        .enumerate()
        .filter_map(|(j, e)| e.map(|e| (j as f64 / dim as f64, e)))
        .collect();
    let (branches, boundaries) = count_branches(&wavenumbers);
    Ok(BranchProfile { n, p, k, dim, curve, wavenumbers, boundaries, branches, expected: p - k, spectrum })
}
