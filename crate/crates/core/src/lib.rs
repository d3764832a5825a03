//! Caputo fractional-order Lagrange system
//! `D^q x1 = x2 x3, D^q x2 = x1 x3, D^q x3 = x1 x2`, with optional linear
//! feedback `(c1 x1, c2 x2, c2 x3)`.
//!
//! The crate covers the vector fields and their Jacobians, the
//! coordinate-axis equilibria, their spectra and Matignon stability
//! classification, and trajectory integration with the explicit fractional
//! Euler scheme. The `fracl` binary exposes all of it from the command line.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod gamma;
pub mod integrator;
pub mod output;
pub mod report;
pub mod spectral;
pub mod types;

pub use dynamics::{
    equilibrium_residual, jacobian, lipschitz_bound, rhs_controlled, rhs_matrix_form,
    rhs_uncontrolled, EquilibriumSpec, Family, Matrix3, MATRIX_A, MATRIX_B,
};
pub use error::{Divergence, Error, Result};
pub use gamma::gamma;
pub use integrator::{
    detect_convergence, euler_coefficient, integrate, rl_integral, step, Convergence,
    IntegratorConfig, Sample, Trajectory,
};
pub use spectral::{
    char_poly, classify, eigen_closed_form, eigen_numeric, eigen_of_symmetric, matignon_test,
    refine_symmetric, solve_cubic, stability_interval_m, CubicPoly, EigenSource, EigenTriple,
    Interval, StabilityStatus, StabilityVerdict,
};
pub use types::{
    complex_arg, Arg, ComplexValue, ControlMode, ControlParams, FractionalOrder, State3, TOL_ZERO,
};
