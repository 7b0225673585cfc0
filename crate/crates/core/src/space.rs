//! Constrained spline subspaces: a raw B-spline space plus a set of linear
//! endpoint conditions, represented by an orthonormal basis of the null space.

use crate::basis::{endpoint_functional, End};
use crate::error::{Error, Result};
use crate::knots::{BreakSequence, ExtendedKnotVector, MAX_DEGREE};
use crate::numerics::{null_space, Mat};
use serde::{Deserialize, Serialize};

/// Relative pivot threshold for rank decisions on constraint matrices.
pub const RANK_TOL: f64 = 1e-9;

/// Endpoint conditions defining a subspace of `S^k_{p,τ}` on `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintFamily {
    /// No conditions.
    Full,
    /// `∂^α s(a) = ∂^α s(b)` for `α < order`.
    Periodic(usize),
    /// `∂^α s(a) = ∂^α s(b) = 0` for even `α ≤ p`.
    EvenZero,
    /// `∂^α s(a) = ∂^α s(b) = 0` for odd `α ≤ p`.
    OddZero,
    /// Even `α ≤ p` vanish at `a`, odd `α ≤ p` vanish at `b`.
    Mixed,
    /// `∂^α s(a) = ∂^α s(b) = 0` for odd `α < p`.
    ReducedOdd,
}

impl ConstraintFamily {
    /// Index `i` of the optimal-space families `S_{p,τ,i}`.
    pub fn optimal(i: usize) -> Result<Self> {
        match i {
            0 => Ok(Self::EvenZero),
            1 => Ok(Self::OddZero),
            2 => Ok(Self::Mixed),
            _ => Err(Error::InvalidSpace(format!("optimal family index must be 0, 1 or 2, got {i}"))),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::Full => "full".into(),
            Self::Periodic(m) => format!("periodic({m})"),
            Self::EvenZero => "even_zero".into(),
            Self::OddZero => "odd_zero".into(),
            Self::Mixed => "mixed".into(),
            Self::ReducedOdd => "reduced_odd".into(),
        }
    }

    /// `(α, end)` pairs forced to zero, or `(α, None)` for periodic matching.
    fn conditions(&self, p: usize) -> Vec<(usize, Option<End>)> {
        let both = |alphas: Vec<usize>| -> Vec<(usize, Option<End>)> {
            alphas.into_iter().flat_map(|a| [(a, Some(End::Left)), (a, Some(End::Right))]).collect()
        };
        match *self {
            Self::Full => vec![],
            Self::Periodic(m) => (0..m).map(|a| (a, None)).collect(),
            Self::EvenZero => both((0..=p).step_by(2).collect()),
            Self::OddZero => both((1..=p).step_by(2).collect()),
            Self::Mixed => (0..=p)
                .step_by(2)
                .map(|a| (a, Some(End::Left)))
                .chain((1..=p).step_by(2).map(|a| (a, Some(End::Right))))
                .collect(),
            Self::ReducedOdd => both((1..p).step_by(2).collect()),
        }
    }
}

/// Constraint rows over raw coefficients for `family` on `kv`.
pub fn constraint_matrix(kv: &ExtendedKnotVector, family: ConstraintFamily) -> Result<Mat> {
    let p = kv.degree();
    if let ConstraintFamily::Periodic(m) = family {
        if m > p + 1 {
            return Err(Error::InvalidSpace(format!("periodic order {m} exceeds p + 1 = {}", p + 1)));
        }
    }
    let mut rows = Vec::new();
    for (alpha, end) in family.conditions(p) {
        let row = match end {
            Some(e) => endpoint_functional(kv, alpha, e)?,
            None => {
                let l = endpoint_functional(kv, alpha, End::Left)?;
                let r = endpoint_functional(kv, alpha, End::Right)?;
                r.iter().zip(&l).map(|(a, b)| a - b).collect()
            }
        };
        rows.push(row);
    }
    if rows.is_empty() {
        return Ok(Mat::zeros(0, kv.dim()));
    }
    Ok(Mat::from_rows(&rows))
}

/// Serializable description `{p, k, family, breaks}` of a spline space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub p: usize,
    pub k: i32,
    pub family: ConstraintFamily,
    pub breaks: BreakSequence,
}

impl SpaceSpec {
    pub fn build(&self) -> Result<SplineSpace> {
        SplineSpace::new(&self.breaks, self.p, self.k, self.family)
    }
}

/// A subspace of `S^k_{p,τ}`; rows of `basis_map` are the raw coefficient
/// vectors of its basis functions.
#[derive(Debug, Clone)]
pub struct SplineSpace {
    knotvec: ExtendedKnotVector,
    family: ConstraintFamily,
    basis_map: Mat,
}

impl SplineSpace {
    /// Builds the subspace of `S^k_{p,τ}` cut out by `family`. The basis of a
    /// constrained family is orthonormal in raw coefficient space; `Full`
    /// keeps the raw B-splines.
    pub fn new(breaks: &BreakSequence, p: usize, k: i32, family: ConstraintFamily) -> Result<Self> {
        if p > MAX_DEGREE {
            return Err(Error::InvalidSpace(format!("degree {p} exceeds the supported maximum {MAX_DEGREE}")));
        }
        let knotvec = ExtendedKnotVector::new(breaks, p, k)?;
        let raw = knotvec.dim();
        let c = constraint_matrix(&knotvec, family)?;
        let basis_map = if c.rows() == 0 {
            Mat::identity(raw)
        } else {
            null_space(&c, raw, RANK_TOL).0
        };
        if basis_map.rows() == 0 {
            return Err(Error::EmptySpace { raw_dim: raw });
        }
        Ok(Self { knotvec, family, basis_map })
    }

    /// Maximal smoothness `k = p - 1`.
    pub fn maximal(breaks: &BreakSequence, p: usize, family: ConstraintFamily) -> Result<Self> {
        Self::new(breaks, p, p as i32 - 1, family)
    }

    /// `S_{p,τ,per}`: maximal smoothness with `p` periodicity conditions.
    pub fn periodic(breaks: &BreakSequence, p: usize) -> Result<Self> {
        Self::maximal(breaks, p, ConstraintFamily::Periodic(p))
    }

    pub fn spec(&self) -> SpaceSpec {
        SpaceSpec { p: self.degree(), k: self.smoothness(), family: self.family, breaks: self.breaks().clone() }
    }

    pub fn knotvec(&self) -> &ExtendedKnotVector {
        &self.knotvec
    }

    pub fn breaks(&self) -> &BreakSequence {
        self.knotvec.breaks()
    }

    pub fn degree(&self) -> usize {
        self.knotvec.degree()
    }

    pub fn smoothness(&self) -> i32 {
        self.knotvec.smoothness()
    }

    pub fn family(&self) -> ConstraintFamily {
        self.family
    }

    pub fn basis_map(&self) -> &Mat {
        &self.basis_map
    }

    pub fn dim(&self) -> usize {
        self.basis_map.rows()
    }

    pub fn raw_dim(&self) -> usize {
        self.knotvec.dim()
    }

    pub fn is_full(&self) -> bool {
        self.family == ConstraintFamily::Full
    }

    pub fn describe(&self) -> String {
        format!(
            "p={} k={} family={} intervals={} dim={}",
            self.degree(),
            self.smoothness(),
            self.family.name(),
            self.breaks().num_intervals(),
            self.dim()
        )
    }

    /// `∂^deriv` of every basis function at `x`.
    pub fn eval_basis(&self, x: f64, deriv: usize) -> Result<Vec<f64>> {
        let (first, vals) = self.knotvec.eval_nonzero(x, deriv)?;
        Ok(self.map_local(first, &vals))
    }

    /// Basis values on element `e` from local raw values starting at `first`.
    pub(crate) fn map_local(&self, first: usize, vals: &[f64]) -> Vec<f64> {
        if self.is_full() {
            let mut out = vec![0.0; self.dim()];
            out[first..first + vals.len()].copy_from_slice(vals);
            return out;
        }
        (0..self.dim())
            .map(|i| {
                let row = &self.basis_map.row(i)[first..first + vals.len()];
                row.iter().zip(vals).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    /// Raw coefficients `Bᵀ c` of the spline with subspace coefficients `c`.
    pub fn to_raw(&self, coeffs: &[f64]) -> Vec<f64> {
        if self.is_full() {
            return coeffs.to_vec();
        }
        self.basis_map.tr_matvec(coeffs)
    }

    /// Subspace coefficients of a raw vector together with the re-expansion
    /// residual `‖Bᵀ B r − r‖ / ‖r‖` (zero iff the spline lies in the space).
    pub fn from_raw(&self, raw: &[f64]) -> (Vec<f64>, f64) {
        if self.is_full() {
            return (raw.to_vec(), 0.0);
        }
        let c = self.basis_map.matvec(raw);
        let back = self.basis_map.tr_matvec(&c);
        let num: f64 = back.iter().zip(raw).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        let den = raw.iter().map(|v| v * v).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
        (c, num / den)
    }

    pub fn eval(&self, coeffs: &[f64], x: f64, deriv: usize) -> Result<f64> {
        if coeffs.len() != self.dim() {
            return Err(Error::Dimension(format!("{} coefficients for a space of dim {}", coeffs.len(), self.dim())));
        }
        self.knotvec.eval_coeffs(&self.to_raw(coeffs), x, deriv)
    }

    /// True when the constant function lies in the space.
    pub fn contains_constants(&self) -> bool {
        let ones = vec![1.0; self.raw_dim()];
        self.from_raw(&ones).1 < 1e-10
    }

    /// Largest constraint violation `|ℓ·b| / (‖ℓ‖‖b‖)` over basis rows `b`.
    pub fn constraint_residual(&self) -> Result<f64> {
        let c = constraint_matrix(&self.knotvec, self.family)?;
        let mut worst = 0.0_f64;
        for j in 0..c.rows() {
            let l = c.row(j);
            let ln = l.iter().map(|v| v * v).sum::<f64>().sqrt();
            if ln == 0.0 {
                continue;
            }
            for i in 0..self.dim() {
                let b = self.basis_map.row(i);
                let bn = b.iter().map(|v| v * v).sum::<f64>().sqrt();
                let d: f64 = l.iter().zip(b).map(|(x, y)| x * y).sum();
                worst = worst.max(d.abs() / (ln * bn));
            }
        }
        Ok(worst)
    }

    /// The space of derivatives: one degree and one smoothness order lower,
    /// one periodicity condition fewer. Only `Full` and `Periodic` spaces.
    pub fn lower(&self) -> Result<Self> {
        if self.degree() == 0 {
            return Err(Error::InvalidSpace("no space below degree 0".into()));
        }
        let family = match self.family {
            ConstraintFamily::Full => ConstraintFamily::Full,
            ConstraintFamily::Periodic(0) | ConstraintFamily::Periodic(1) => ConstraintFamily::Full,
            ConstraintFamily::Periodic(m) => ConstraintFamily::Periodic(m - 1),
            f => {
                return Err(Error::Unsupported(format!(
                    "derivative space of the {} family is not a family member",
                    f.name()
                )))
            }
        };
        Self::new(self.breaks(), self.degree() - 1, self.smoothness() - 1, family)
    }
}
