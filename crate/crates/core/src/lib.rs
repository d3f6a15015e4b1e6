//! Sinusoidal parameter estimation by linearising the amplitude-modulated
//! sinusoidal model around initial frequency estimates and solving the
//! resulting least-squares problem with Gauss-Seidel sweeps.
//!
//! The crate is organised as:
//!
//! * [`model`]: analysis frames, the four-column-per-partial basis, exact
//!   synthesis and the map between linear weights and sinusoid parameters.
//! * [`solvers`]: direct normal-equation solve, Jacobi, Gauss-Seidel (plain
//!   and even/odd split) and the linear and non-linear estimators.
//! * [`baselines`]: DFT peak picking and a matching-pursuits reference.
//! * [`experiments`]: chirp generation, noise, scoring, SNR sweeps,
//!   convergence studies and the closed-form flop model.
//! * [`cli`]: the `sinefit` command line.

pub mod baselines;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod flops;
pub mod model;
pub mod solvers;

pub use error::{Error, Result};
pub use model::{
    build_basis, make_frame_config, params_from_weights, synthesize, weights_from_params, BasisSet,
    ColumnKind, FrameConfig, LinWeights, Parity, Recovered, SinusoidParams,
};
pub use solvers::{
    estimate_linear, estimate_nonlinear, solve_direct, solve_gauss_seidel,
    solve_gauss_seidel_evenodd, solve_jacobi, LinearEstimate, NonlinearResult, SolveTrace,
};
