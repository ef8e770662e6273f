//! Grids, finite differences, quadrature, tridiagonal eigensolving and
//! bracketed root finding. Everything here is a pure function of its inputs.

mod calculus;
mod grid;
mod roots;
mod tridiag;

pub use calculus::{cumulative_integral, derivative, integrate};
pub use grid::{Boundary, Grid, GridFunction, MIN_POINTS};
pub use roots::{find_root_bracketed, find_root_with, Root, RootTolerance};
pub use tridiag::{
    apply_schrodinger, eigenvalues_lowest, eigenvalues_lowest_with_tol, TridiagonalOperator,
    DEFAULT_EIG_TOL,
};
