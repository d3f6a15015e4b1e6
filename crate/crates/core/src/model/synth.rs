use super::frame::FrameConfig;
use super::params::{PartialWeights, SinusoidParams};

/// Evaluates the exact amplitude-modulated model
/// `sum (A + A' t) cos(theta t + phi)` on the centred time axis, optionally
/// multiplied by the analysis window.
pub fn synthesize(params: &[SinusoidParams], cfg: &FrameConfig, windowed: bool) -> Vec<f64> {
    cfg.time_index()
        .iter()
        .zip(cfg.window())
        .map(|(&t, &h)| {
            let v: f64 = params
                .iter()
                .map(|p| (p.amp + p.amp_slope * t) * (p.freq * t + p.phase).cos())
                .sum();
            if windowed {
                h * v
            } else {
                v
            }
        })
        .collect()
}

/// Evaluates the linearised model
/// `sum c cos(theta t) + s sin(theta t) + d t cos(theta t) + t_k t sin(theta t)`
/// with raw (unnormalised) weights.
pub fn synthesize_linearized(
    weights: &[PartialWeights],
    freqs: &[f64],
    cfg: &FrameConfig,
    windowed: bool,
) -> Vec<f64> {
    assert_eq!(weights.len(), freqs.len());
    cfg.time_index()
        .iter()
        .zip(cfg.window())
        .map(|(&t, &h)| {
            let v: f64 = weights
                .iter()
                .zip(freqs)
                .map(|(w, &theta)| {
                    let (sin_t, cos_t) = (theta * t).sin_cos();
                    w.c * cos_t + w.s * sin_t + t * (w.d * cos_t + w.t * sin_t)
                })
                .sum();
            if windowed {
                h * v
            } else {
                v
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::model::{make_frame_config, weights_from_params};

    #[test]
    fn unwindowed_single_partial() {
        let cfg = make_frame_config(64).unwrap();
        let p = SinusoidParams::new(1.0, 0.1 * PI, 0.0, 0.0);
        let x = synthesize(&[p], &cfg, false);
        for (v, t) in x.iter().zip(cfg.time_index()) {
            assert_eq!(*v, (0.1 * PI * t).cos());
        }
    }

    #[test]
    fn zero_amplitude_is_silent() {
        let cfg = make_frame_config(64).unwrap();
        let p = SinusoidParams::new(0.0, 0.4, 1.0, 0.0);
        assert!(synthesize(&[p], &cfg, true).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn windowed_energy_matches_independent_evaluation() {
        let len = 256;
        let cfg = make_frame_config(len).unwrap();
        let p = SinusoidParams::new(1.0, 0.1 * PI, PI / 4.0, 0.001);
        let energy: f64 = synthesize(&[p], &cfg, true).iter().map(|v| v * v).sum();

        // Straight from the definitions, 1-based sample index.
        let mut oracle = 0.0;
        for i in 1..=len {
            let n = i as f64 - (len as f64 + 1.0) / 2.0;
            let h = (PI * n / len as f64).cos();
            let v = h * (1.0 + 0.001 * n) * (0.1 * PI * n + PI / 4.0).cos();
            oracle += v * v;
        }
        assert!((energy - oracle).abs() <= 1e-12 * oracle);
    }

    #[test]
    fn linearised_model_is_exact_without_offset() {
        let cfg = make_frame_config(128).unwrap();
        let p = SinusoidParams::new(0.8, 0.9, -1.1, 0.002);
        let exact = synthesize(&[p], &cfg, true);
        let lin = synthesize_linearized(&[weights_from_params(&p, 0.0)], &[p.freq], &cfg, true);
        for (a, b) in exact.iter().zip(&lin) {
            assert!((a - b).abs() < 1e-13);
        }
    }
}
