//! Spline spaces of arbitrary degree and smoothness, L2 and Ritz projections,
//! Galerkin spectra of the periodic Laplacian, and Kolmogorov n-width
//! integral operators.

pub mod basis;
pub mod error;
pub mod knots;
pub mod nwidth;
pub mod numerics;
pub mod projection;
pub mod space;
pub mod spectral;

pub use basis::{antidifferentiate, differentiate, endpoint_functional, End};
pub use error::{Error, Result};
pub use knots::{make_special_breaks, BreakKind, BreakSequence, ExtendedKnotVector, MAX_DEGREE};
pub use numerics::{Mat, QuadratureRule, SymEigResult};
pub use space::{ConstraintFamily, SpaceSpec, SplineSpace};
