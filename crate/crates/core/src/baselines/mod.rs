//! Reference estimators: DFT peak picking for initial frequencies and
//! matching pursuits over an oversampled sinusoid dictionary.

mod mp;
mod peaks;

pub use mp::{matching_pursuit, AtomTable, Dictionary, MpAtom, MpResult};
pub use peaks::{dft_peak_pick, magnitude_spectrum};
