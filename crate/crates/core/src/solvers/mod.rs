//! Least-squares solvers for the linearised model and the estimators built
//! on them.

mod direct;
mod estimate;
mod gauss_seidel;
mod jacobi;

pub use direct::solve_direct;
pub use estimate::{
    amp_floor, estimate_linear, estimate_nonlinear, ClampEvent, LinearEstimate, NonlinearResult,
    FREQ_MARGIN,
};
pub use gauss_seidel::{
    solve_gauss_seidel, solve_gauss_seidel_evenodd, solve_gauss_seidel_evenodd_with,
    solve_gauss_seidel_with, GsOptions, SweepOrder,
};
pub use jacobi::solve_jacobi;

use crate::model::LinWeights;

/// What an iterative solve did.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SolveTrace {
    /// `||x_h - A w||^2` before the first iteration and after each one.
    pub residual_energy: Vec<f64>,
    /// Final weights, on the normalised basis columns.
    pub weights: LinWeights,
    /// Iterations actually run.
    pub iterations: usize,
    /// Arithmetic operations spent (see [`crate::flops`]).
    pub flops: u64,
    /// Set by Jacobi when the residual grew three iterations in a row.
    pub diverged: bool,
    /// Residual energy after every single column update, when requested.
    pub step_energy: Vec<f64>,
}
