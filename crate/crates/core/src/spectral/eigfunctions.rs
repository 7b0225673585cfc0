//! Eigenfunction convergence and the even/odd degree orthogonality pattern.

use super::periodic_pencil;
use crate::error::{Error, Result};
use crate::knots::BreakSequence;
use crate::numerics::{max_principal_angle, QuadratureRule};
use crate::projection::{basis_samples, error_norm, load_vector, oversampled_nodes, project, FunctionSpec, ProjectorKind};
use crate::space::SplineSpace;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const CLUSTER_TOL: f64 = 1e-7;
/// Tolerance for the orthogonality facts checked by the explorer.
pub const ORTHOGONALITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigfunctionError {
    /// Exact index `j`.
    pub j: usize,
    /// Discrete indices compared against `ψ_j` (one or two).
    pub cluster: Vec<usize>,
    pub nu_h: Vec<f64>,
    /// Largest principal angle between the exact and discrete eigenspaces.
    pub angle: f64,
    /// `‖ψ - ψ^h‖` after alignment, i.e. `2 sin(angle / 2)`.
    pub distance: f64,
}

fn is_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= CLUSTER_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Eigenfunction error for the exact periodic mode `j`.
///
/// `ψ_0` is the constant; for `j ≥ 1` the exact eigenspace is
/// `span{sin(2πix/L), cos(2πix/L)}` with `i = ⌈j/2⌉` and is compared with the
/// discrete cluster `{2i - 1, 2i}` through principal angles.
pub fn galerkin_eigfunction_error(space: &SplineSpace, j: usize) -> Result<EigfunctionError> {
    let eig = periodic_pencil(space)?;
    let d = eig.values.len();
    let cluster: Vec<usize> = if j == 0 { vec![0] } else { vec![2 * j.div_ceil(2) - 1, 2 * j.div_ceil(2)] };
    if *cluster.last().unwrap() >= d {
        return Err(Error::Invalid(format!("mode {j} needs {} discrete eigenpairs, space has {d}", cluster.last().unwrap() + 1)));
    }
    let v = &eig.values;
    let first = cluster[0];
    let last = *cluster.last().unwrap();
    let inside = cluster.windows(2).all(|w| is_close(v[w[0]], v[w[1]]));
    let below = first > 0 && is_close(v[first - 1], v[first]);
    let above = last + 1 < d && is_close(v[last], v[last + 1]);
    if !inside || below || above {
        return Err(Error::Invalid(format!(
            "discrete cluster at mode {j} does not have multiplicity {}",
            cluster.len()
        )));
    }

    let a = space.breaks().a();
    let len = space.breaks().length();
    let rule = QuadratureRule::composite(space.breaks(), oversampled_nodes(space.degree()) + 4)?;
    let basis = basis_samples(space, &rule, 0);
    let w = rule.weights();

    // mass-orthonormal eigenvectors give L2-orthonormal eigenfunctions
    let discrete: Vec<Vec<f64>> = cluster.iter().map(|&c| basis.tr_matvec(&eig.vector(c))).collect();
    let exact: Vec<Vec<f64>> = if j == 0 {
        vec![vec![1.0 / len.sqrt(); rule.len()]]
    } else {
        let omega = 2.0 * PI * j.div_ceil(2) as f64 / len;
        let c = (2.0 / len).sqrt();
        vec![
            rule.nodes().iter().map(|&x| c * (omega * (x - a)).sin()).collect(),
            rule.nodes().iter().map(|&x| c * (omega * (x - a)).cos()).collect(),
        ]
    };
    let angle = max_principal_angle(w, &discrete, &exact)?;
    Ok(EigfunctionError {
        j,
        cluster: cluster.clone(),
        nu_h: cluster.iter().map(|&c| v[c]).collect(),
        angle,
        distance: 2.0 * (angle / 2.0).sin(),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConjectureRow {
    pub p: usize,
    /// `"sin"` for even `p`, `"cos"` for odd `p`.
    pub target: String,
    /// `‖u - Q_p^q u‖` for the target.
    pub error: f64,
    /// `max_i |(b_i, v)|` for the complementary function `v`
    /// (`cos` for even `p`, `sin` for odd `p`).
    pub orthogonality: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub m: usize,
    pub n: usize,
    pub q: usize,
    pub rows: Vec<ConjectureRow>,
    /// `max_i |∫_{I_i} cos(2πmx) dx|` over the knot intervals.
    pub piecewise_constant_residual: f64,
    /// All orthogonality facts hold to [`ORTHOGONALITY_TOL`].
    pub orthogonality_holds: bool,
}

/// Errors of `Q_p^q` applied to `sin(2πm·)` (even `p`) and `cos(2πm·)` (odd `p`)
/// on the uniform periodic space with `n = 2m` intervals.
pub fn conjecture_explorer(m: usize, q: usize, degrees: std::ops::RangeInclusive<usize>) -> Result<ConjectureReport> {
    if m == 0 {
        return Err(Error::Invalid("m must be positive".into()));
    }
    let n = 2 * m;
    let breaks = BreakSequence::uniform(n, 0.0, 1.0)?;
    let sin = FunctionSpec::by_name(&format!("sin_{n}"))?;
    let cos = FunctionSpec::by_name(&format!("cos_{n}"))?;
    let omega = 2.0 * PI * m as f64;
    let piecewise_constant_residual = breaks
        .points()
        .windows(2)
        .map(|w| ((omega * w[1]).sin() - (omega * w[0]).sin()).abs() / omega)
        .fold(0.0, f64::max);

    let mut rows = Vec::new();
    for p in degrees {
        if p == 0 || p > crate::knots::MAX_DEGREE {
            return Err(Error::Invalid(format!("degree {p} outside 1..={}", crate::knots::MAX_DEGREE)));
        }
        let space = SplineSpace::periodic(&breaks, p)?;
        let (target, other, name) = if p % 2 == 0 { (&sin, &cos, "sin") } else { (&cos, &sin, "cos") };
        let kind = if q == 0 { ProjectorKind::L2 } else { ProjectorKind::RitzRecursive(q) };
        let proj = project(&space, target, kind)?;
        let error = error_norm(&space, target, &proj.coeffs, 0)?;
        let orthogonality = load_vector(&space, other, 0)?.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
        rows.push(ConjectureRow { p, target: name.into(), error, orthogonality });
    }
    let orthogonality_holds =
        piecewise_constant_residual <= ORTHOGONALITY_TOL && rows.iter().all(|r| r.orthogonality <= ORTHOGONALITY_TOL);
    Ok(ConjectureReport { m, n, q, rows, piecewise_constant_residual, orthogonality_holds })
}
