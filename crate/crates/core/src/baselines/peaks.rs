use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::model::FrameConfig;

/// `|X(m)|` of the windowed frame for `m = 0..=L/2`.
pub fn magnitude_spectrum(x: &[f64], cfg: &FrameConfig) -> Result<Vec<f64>> {
    let xh = cfg.apply_window(x)?;
    let len = cfg.frame_len();
    let mut buf: Vec<Complex<f64>> = xh.iter().map(|&v| Complex::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    Ok(buf[..=len / 2].iter().map(|c| c.norm()).collect())
}

/// Frequencies `2 pi m / L` of the `partials` largest strict local maxima
/// of the windowed magnitude spectrum, largest first.
///
/// DC and Nyquist are never returned. Fewer frequencies come back when the
/// spectrum has fewer peaks; an all-zero frame yields none. Ties in
/// magnitude go to the lower bin.
pub fn dft_peak_pick(x: &[f64], cfg: &FrameConfig, partials: usize) -> Result<Vec<f64>> {
    if partials == 0 {
        return Err(Error::NoPartials);
    }
    if 4 * partials > cfg.frame_len() {
        return Err(Error::Underdetermined {
            partials,
            columns: 4 * partials,
            frame_len: cfg.frame_len(),
        });
    }
    let mag = magnitude_spectrum(x, cfg)?;
    let mut peaks: Vec<usize> = (1..mag.len() - 1)
        .filter(|&m| mag[m] > mag[m - 1] && mag[m] > mag[m + 1])
        .collect();
    peaks.sort_by(|&a, &b| mag[b].total_cmp(&mag[a]).then(a.cmp(&b)));
    peaks.truncate(partials);
    Ok(peaks
        .into_iter()
        .map(|m| 2.0 * PI * m as f64 / cfg.frame_len() as f64)
        .collect())
}
