//! Conditional embedding of discrete-time Markov chains.
//!
//! Given a stochastic matrix `P` with positive diagonal, [`j1_generator`]
//! computes the unique intensity matrix `Q` whose chain, conditioned on at
//! most one jump in the unit interval, has one-step transition matrix `P`.
//! The crate also provides the Jarrow–Lando–Turnbull closed-form generator
//! for comparison, a matrix exponential, embeddability screens, and a
//! Monte-Carlo path simulator used as an independent check.

pub mod cli;
pub mod embed;
pub mod error;
pub mod expm;
pub mod fixtures;
pub mod io;
pub mod jlt;
pub mod kernel;
pub mod lu;
pub mod matrix;
pub mod mc;
pub mod scalar;
pub mod solver;

pub use embed::{goodman_check, j1_embeddable, scalar_inequalities_check, two_state_embeddable, GoodmanReport};
pub use error::{Error, Result};
pub use expm::{expm, norm_gap};
pub use jlt::jlt;
pub use kernel::{conditional_transition_matrix, joint_kernel, JointKernel};
pub use matrix::{
    diagonal_extremes, max_row_sum_norm, validate_stochastic, DiagonalExtremes, IntensityMatrix, SquareMatrix,
    StochasticMatrix,
};
pub use mc::{simulate_conditional, SimulationConfig, SimulationEstimate};
pub use scalar::{lambert_w0, rho, tau, StableThreshold};
pub use solver::{
    apply_t, contraction_estimate, j1_generator, qii_bounds, ContractionEstimate, MethodPreference, SolveMethod,
    SolveReport, SolverConfig, ThetaVector,
};
