//! Inverse inequality `‖s′‖ ≤ 2√3/h_min ‖s‖`.

use crate::error::{Error, Result};
use crate::numerics::gen_sym_eig;
use crate::projection::gram_matrix;
use crate::space::{ConstraintFamily, SpaceSpec, SplineSpace};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InverseInequalityReport {
    pub space: SpaceSpec,
    /// `max ‖s′‖ / ‖s‖` over the space.
    pub ratio: f64,
    /// `2√3 / h_min`.
    pub bound: f64,
    /// `bound / ratio`.
    pub slack: f64,
    /// The space satisfies `∂^α s(0)∂^{α-1}s(0) = ∂^α s(1)∂^{α-1}s(1)`,
    /// `α = 1, …, p - 1`, so the bound is guaranteed.
    pub conforming: bool,
}

impl InverseInequalityReport {
    /// True when the bound holds (up to rounding) or the space is not covered.
    pub fn passed(&self) -> bool {
        !self.conforming || self.ratio <= self.bound * (1.0 + 1e-10)
    }
}

/// Whether the boundary conditions behind the inverse inequality hold for
/// every element of `space`.
pub fn is_conforming(space: &SplineSpace) -> bool {
    let p = space.degree();
    if space.smoothness() != p as i32 - 1 {
        return false;
    }
    if p == 1 {
        return true;
    }
    match space.family() {
        ConstraintFamily::Full => false,
        ConstraintFamily::Periodic(m) => m >= p,
        ConstraintFamily::EvenZero | ConstraintFamily::OddZero | ConstraintFamily::Mixed | ConstraintFamily::ReducedOdd => {
            true
        }
    }
}

/// Extremal ratio `√λ_max` of the stiffness/mass pencil against `2√3/h_min`.
pub fn inverse_report(space: &SplineSpace) -> Result<InverseInequalityReport> {
    if space.degree() == 0 {
        return Err(Error::InvalidSpace("the inverse inequality needs p >= 1".into()));
    }
    let k = gram_matrix(space, 1)?;
    let m = gram_matrix(space, 0)?;
    let lmax = gen_sym_eig(&k, &m)?.max_value().max(0.0);
    let ratio = lmax.sqrt();
    let bound = 2.0 * 3f64.sqrt() / space.breaks().h_min();
    Ok(InverseInequalityReport {
        space: space.spec(),
        ratio,
        bound,
        slack: bound / ratio,
        conforming: is_conforming(space),
    })
}
