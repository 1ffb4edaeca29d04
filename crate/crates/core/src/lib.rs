//! Uniform variation-diminishing spline operator on [0, 1]: clamped B-spline
//! bases, node-average sampling, operator iterates through collocation-matrix
//! powers, the second-order modulus of smoothness, and numerically certified
//! two-sided bounds relating the approximation error to that modulus.
//!
//! The headline check: with the step `delta` chosen from the mesh gauge and
//! the basis stability constants, `omega2(f, delta) <= 5 * ||f - S f||` holds
//! across a corpus of continuous test functions.

pub mod basis;
pub mod bounds;
pub mod corpus;
pub mod error;
pub mod modulus;
pub mod operator;

pub use basis::{divided_difference, GrevilleNodes, UniformMesh};
pub use bounds::{
    beutel_upper_constant, delta, epsilon_nk, estimate_dk, iterate_d2_bound,
    lower_bound_constant, lower_bound_report, lower_bound_report_with_slack, zeta_three_halves,
    BoundContext, BoundReport, DkStrategy, DEFAULT_SLACK,
};
pub use corpus::{builtin_corpus, find_function, Smoothness, TestFunction};
pub use error::{Error, Result};
pub use modulus::{kfunctional_rhs, omega2, spline_sup_abs, sup_abs, sup_norm_error, GridSpec};
pub use operator::{
    backward_difference, collocation_matrix, iterate, schoenberg, CollocationMatrix,
    SplineFunction,
};
