//! Synthetic-signal experiments: chirp ground truth, noise, per-frame
//! scoring, SNR sweeps, convergence curves and the closed-form complexity
//! model.

mod chirp;
mod convergence;
mod flop_model;
mod noise;
mod report;
mod score;
mod sweep;

pub use chirp::{gen_chirps, ChirpSignal, ChirpSpec, FrameTruth, TruthPartial};
pub use convergence::{
    run_convergence, ConvergenceReport, ConvergenceScenario, Curve, SINGLE_AM_INIT,
    SINGLE_AM_PARTIAL,
};
pub use flop_model::{flop_model, mflops, FlopMethod, TYPICAL_FRAMES_PER_SEC};
pub use noise::add_noise;
pub use report::{format_sig9, ExperimentReport, ModelColumns, ReportRow, REPORT_HEADER};
pub use score::{score_frame, FrameScore};
pub use sweep::{default_snr_grid, noise_seed, run_snr_sweep, snap_to_bins, Method};
