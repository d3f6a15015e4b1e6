/// Methods with a closed-form per-frame operation count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FlopMethod {
    /// `(8M + 5) L N`
    Linear,
    /// `(17M - 4) L N`
    Nonlinear,
    /// `4 L N^2 P`
    MpSlow,
}

/// 48 kHz audio analysed with a hop of 192 samples.
pub const TYPICAL_FRAMES_PER_SEC: f64 = 250.0;

/// Closed-form operation count per frame. `iters` is ignored for
/// [`FlopMethod::MpSlow`] and `oversample` for the other two.
///
/// # Panics
///
/// If `iters` is zero for the non-linear method.
pub fn flop_model(
    method: FlopMethod,
    frame_len: u64,
    partials: u64,
    iters: u64,
    oversample: u64,
) -> u64 {
    let ln = frame_len * partials;
    match method {
        FlopMethod::Linear => (8 * iters + 5) * ln,
        FlopMethod::Nonlinear => {
            assert!(
                iters >= 1,
                "non-linear flop model needs at least one iteration"
            );
            (17 * iters - 4) * ln
        }
        FlopMethod::MpSlow => 4 * ln * partials * oversample,
    }
}

/// Millions of operations per second at `frames_per_sec`.
pub fn mflops(ops_per_frame: u64, frames_per_sec: f64) -> f64 {
    ops_per_frame as f64 * frames_per_sec / 1e6
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn typical_scenario() {
        let lin = flop_model(FlopMethod::Linear, 256, 20, 2, 0);
        let non = flop_model(FlopMethod::Nonlinear, 256, 20, 3, 0);
        let mp = flop_model(FlopMethod::MpSlow, 256, 20, 0, 32);
        assert_eq!((lin, non, mp), (107_520, 240_640, 13_107_200));
        assert_eq!(mflops(lin, TYPICAL_FRAMES_PER_SEC), 26.88);
        assert_eq!(mflops(non, TYPICAL_FRAMES_PER_SEC), 60.16);
        assert_eq!(mflops(mp, TYPICAL_FRAMES_PER_SEC), 3276.8);
    }

    #[test]
    fn scales_linearly_in_frame_length() {
        for m in [
            FlopMethod::Linear,
            FlopMethod::Nonlinear,
            FlopMethod::MpSlow,
        ] {
            assert_eq!(flop_model(m, 512, 7, 3, 8), 2 * flop_model(m, 256, 7, 3, 8));
        }
    }
}
