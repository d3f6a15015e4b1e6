use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Analysis frame geometry: length, sine window and centred time axis.
///
/// Sample `n` (0-based) sits at model time `(n + 1) - (L + 1) / 2`, so the
/// time axis is made of half-integers symmetric about zero. The window
/// `h(n) = cos(pi * t / L)` is the sine window; applied to both the signal
/// and the basis it acts as a Hann analysis window.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameConfig {
    frame_len: usize,
    window: Vec<f64>,
    time_index: Vec<f64>,
    window_energy: f64,
    ramp_energy: f64,
}

/// Builds the frame geometry for an even frame length `L >= 8`.
pub fn make_frame_config(frame_len: usize) -> Result<FrameConfig> {
    if frame_len < 8 || !frame_len.is_multiple_of(2) {
        return Err(Error::InvalidFrameLength(frame_len));
    }
    let half = frame_len / 2;
    let mut window = vec![0.0; frame_len];
    let mut time_index = vec![0.0; frame_len];
    let mut window_energy = 0.0;
    let mut ramp_energy = 0.0;
    // Fill the upper half and mirror so both vectors are exactly symmetric.
    for m in 0..half {
        let t = m as f64 + 0.5;
        let h = (PI * t / frame_len as f64).cos();
        let upper = half + m;
        let lower = half - 1 - m;
        time_index[upper] = t;
        time_index[lower] = -t;
        window[upper] = h;
        window[lower] = h;
        window_energy += h * h;
        ramp_energy += t * t * h * h;
    }
    Ok(FrameConfig {
        frame_len,
        window,
        time_index,
        window_energy: 2.0 * window_energy,
        ramp_energy: 2.0 * ramp_energy,
    })
}

impl FrameConfig {
    pub fn frame_len(&self) -> usize {
        self.frame_len
    }

    pub fn half_len(&self) -> usize {
        self.frame_len / 2
    }

    pub fn window(&self) -> &[f64] {
        &self.window
    }

    pub fn time_index(&self) -> &[f64] {
        &self.time_index
    }

    /// `sum h(n)^2` over the frame.
    pub fn window_energy(&self) -> f64 {
        self.window_energy
    }

    /// `sum t(n)^2 h(n)^2` over the frame.
    pub fn ramp_energy(&self) -> f64 {
        self.ramp_energy
    }

    /// One DFT bin, `2 pi / L` rad/sample.
    pub fn bin_width(&self) -> f64 {
        2.0 * PI / self.frame_len as f64
    }

    /// Multiplies `frame` by the analysis window.
    pub fn apply_window(&self, frame: &[f64]) -> Result<Vec<f64>> {
        self.check_len(frame)?;
        Ok(frame.iter().zip(&self.window).map(|(x, h)| x * h).collect())
    }

    pub(crate) fn check_len(&self, frame: &[f64]) -> Result<()> {
        if frame.len() != self.frame_len {
            return Err(Error::LengthMismatch {
                expected: self.frame_len,
                actual: frame.len(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_and_short_frames() {
        assert_eq!(make_frame_config(7), Err(Error::InvalidFrameLength(7)));
        assert_eq!(make_frame_config(6), Err(Error::InvalidFrameLength(6)));
        assert_eq!(make_frame_config(255), Err(Error::InvalidFrameLength(255)));
        assert!(make_frame_config(8).is_ok());
    }

    #[test]
    fn centre_adjacent_sample() {
        let cfg = make_frame_config(256).unwrap();
        assert_eq!(cfg.time_index()[127], -0.5);
        assert_eq!(cfg.time_index()[128], 0.5);
        let expected = (-0.5 * PI / 256.0).cos();
        assert_eq!(cfg.window()[127], expected);
        assert!((cfg.window()[127] - 0.99998).abs() < 1e-5);
    }

    #[test]
    fn time_axis_sums_to_zero() {
        for len in [8, 64, 256, 1024] {
            let cfg = make_frame_config(len).unwrap();
            assert_eq!(cfg.time_index().iter().sum::<f64>(), 0.0);
            for n in 0..len {
                let expected = (n + 1) as f64 - (len + 1) as f64 / 2.0;
                assert_eq!(cfg.time_index()[n], expected);
            }
        }
    }

    #[test]
    fn window_edge_value() {
        let cfg = make_frame_config(64).unwrap();
        // cos(-0.4921875 pi)
        assert!((cfg.window()[0] - 0.024541228522912).abs() < 1e-12);
    }

    #[test]
    fn window_is_symmetric_and_positive() {
        let cfg = make_frame_config(100).unwrap();
        let w = cfg.window();
        for n in 0..100 {
            assert!(w[n] > 0.0 && w[n] <= 1.0);
            assert_eq!(w[n], w[99 - n]);
        }
    }

    #[test]
    fn cached_energies_match_direct_sums() {
        let cfg = make_frame_config(256).unwrap();
        let h2: f64 = cfg.window().iter().map(|h| h * h).sum();
        let th2: f64 = cfg
            .window()
            .iter()
            .zip(cfg.time_index())
            .map(|(h, t)| t * t * h * h)
            .sum();
        assert!((cfg.window_energy() - h2).abs() < 1e-12 * h2);
        assert!((cfg.ramp_energy() - th2).abs() < 1e-12 * th2);
    }
}
