//! Frame geometry, the linearised basis and the sinusoid parameter maps.

mod basis;
mod frame;
mod params;
mod synth;

pub use basis::{
    build_basis, build_basis_counted, BasisSet, ColumnKind, Parity, DUPLICATE_FREQ_TOL,
};
pub use frame::{make_frame_config, FrameConfig};
pub use params::{
    params_from_weights, weights_from_params, wrap_phase, LinWeights, PartialWeights, Recovered,
    SinusoidParams,
};
pub use synth::{synthesize, synthesize_linearized};
