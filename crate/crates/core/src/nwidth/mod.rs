//! Integral-operator representations of Sobolev classes, numerical
//! `‖(I - P)K^r‖`, exact n-widths and eigenfunction convergence of the
//! optimal spline spaces.

pub mod eigconv;
pub mod grid;
pub mod norms;

pub use eigconv::{
    eigconv_report, kkstar_spectrum_check, neumann_green_residual, optimal_eigenfunction, optimal_space,
    periodic_eigconv, periodic_eigenfunction, EigconvReport, KkStarReport, PeriodicEigconvReport, ROUNDING_FLOOR,
};
pub use grid::{Factor, FineGrid, KernelOperator, OperatorChain, GRID_NODES, MAX_GRID, MIN_GRID};
pub use norms::{
    exact_nwidth, optimality_ratio, residual_norm_on_grid, residual_operator_norm, FunctionClass, GridProjector,
    NormReport, OperatorNorm, CERTIFICATE_TOL,
};
