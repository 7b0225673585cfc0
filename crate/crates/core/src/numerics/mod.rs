//! Quadrature and dense symmetric linear algebra.

pub mod eigen;
pub mod linalg;
pub mod matrix;
pub mod quadrature;
pub mod subspace;

pub use eigen::{gen_sym_eig, power_iteration, sym_eig, PowerIteration, SymEigResult};
pub use linalg::{cholesky, null_space, solve_lu, solve_spd, Cholesky};
pub use matrix::{dot, norm2, Mat};
pub use quadrature::{gauss_legendre, GaussRule, QuadratureRule, MAX_GAUSS_NODES};
pub use subspace::{max_principal_angle, w_orthonormalize, weighted_dot};
