use rayon::prelude::*;

use super::chirp::{gen_chirps, ChirpSpec};
use super::noise::add_noise;
use super::report::{ExperimentReport, ReportRow};
use super::score::{score_frame, FrameScore};
use crate::baselines::{AtomTable, Dictionary};
use crate::error::{Error, Result};
use crate::model::{make_frame_config, FrameConfig, SinusoidParams};
use crate::solvers::{estimate_linear, estimate_nonlinear};

/// An estimator configuration compared in a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Linear { iters: usize },
    Nonlinear { iters: usize, alpha: f64 },
    MatchingPursuit { oversample: usize },
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Linear { .. } => "linear",
            Method::Nonlinear { .. } => "nonlinear",
            Method::MatchingPursuit { .. } => "mp",
        }
    }

    /// Gauss-Seidel sweeps or outer iterations; zero for matching pursuits.
    pub fn iterations(&self) -> usize {
        match *self {
            Method::Linear { iters } | Method::Nonlinear { iters, .. } => iters,
            Method::MatchingPursuit { .. } => 0,
        }
    }
}

/// -10 to 60 dB in 10 dB steps, then the clean signal.
pub fn default_snr_grid() -> Vec<f64> {
    (-1..=6)
        .map(|k| 10.0 * k as f64)
        .chain([f64::INFINITY])
        .collect()
}

/// Rounds each frequency to the nearest DFT bin in `1..L/2`. A collision
/// moves the later partial to the nearest free bin.
pub fn snap_to_bins(freqs: &[f64], cfg: &FrameConfig) -> Result<Vec<f64>> {
    let bin = cfg.bin_width();
    let last = cfg.frame_len() / 2 - 1;
    if freqs.len() > last {
        return Err(Error::InvalidParameter(format!(
            "{} partials do not fit in {last} interior bins",
            freqs.len()
        )));
    }
    let mut taken = vec![false; last + 1];
    let mut out = Vec::with_capacity(freqs.len());
    for &f in freqs {
        let ideal = ((f / bin).round() as i64).clamp(1, last as i64);
        let m = (0..=last as i64)
            .flat_map(|d| [ideal - d, ideal + d])
            .find(|&m| (1..=last as i64).contains(&m) && !taken[m as usize])
            .expect("a free bin exists");
        taken[m as usize] = true;
        out.push(m as f64 * bin);
    }
    Ok(out)
}

/// Seed of the noise drawn for SNR grid position `snr_index`.
pub fn noise_seed(seed: u64, snr_index: usize) -> u64 {
    let stream = snr_index as u64;
    // splitmix64 finaliser over the combined key.
    let mut z = seed ^ stream.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

struct FrameOutcome {
    score: FrameScore,
    flops: u64,
}

fn run_method(
    method: &Method,
    frame: &[f64],
    init: &[f64],
    partials: usize,
    cfg: &FrameConfig,
    table: Option<&AtomTable>,
) -> Result<(Vec<SinusoidParams>, u64)> {
    match *method {
        Method::Linear { iters } => {
            let est = estimate_linear(frame, init, cfg, iters)?;
            Ok((est.params, est.trace.flops))
        }
        Method::Nonlinear { iters, alpha } => {
            let est = estimate_nonlinear(frame, init, cfg, iters, alpha)?;
            Ok((est.params, est.trace.flops))
        }
        Method::MatchingPursuit { .. } => {
            let res = table
                .expect("atom table built")
                .pursue(frame, cfg, partials)?;
            Ok((res.atoms, res.flops))
        }
    }
}

/// Runs every method at every SNR on the chirp mixture and pools the
/// per-frame errors.
///
/// Iterative methods start from the true frame-centre frequencies snapped
/// to DFT bins. Noise for SNR index `i` is drawn from a stream derived
/// from `(seed, i)`, so results do not depend on thread scheduling.
pub fn run_snr_sweep(
    spec: &ChirpSpec,
    snr_grid: &[f64],
    methods: &[Method],
    seed: u64,
) -> Result<ExperimentReport> {
    if methods.is_empty() {
        return Err(Error::InvalidParameter(
            "at least one method is required".into(),
        ));
    }
    if snr_grid.is_empty() {
        return Err(Error::InvalidParameter("SNR grid is empty".into()));
    }
    let cfg = make_frame_config(spec.frame_len)?;
    let clean = gen_chirps(spec, seed)?;
    let partials = spec.start_freqs.len();

    let inits = clean
        .frames
        .iter()
        .map(|f| snap_to_bins(&f.partials.iter().map(|p| p.freq).collect::<Vec<_>>(), &cfg))
        .collect::<Result<Vec<_>>>()?;
    let clean_windowed = clean
        .frames
        .iter()
        .map(|f| cfg.apply_window(clean.frame(f, spec.frame_len)))
        .collect::<Result<Vec<_>>>()?;

    let mut tables = Vec::with_capacity(methods.len());
    for m in methods {
        tables.push(match *m {
            Method::MatchingPursuit { oversample } => Some(AtomTable::new(
                Dictionary::new(spec.frame_len, oversample)?,
                &cfg,
            )?),
            _ => None,
        });
    }

    let mut rows = Vec::with_capacity(snr_grid.len() * methods.len());
    for (si, &snr) in snr_grid.iter().enumerate() {
        let noisy = add_noise(&clean.samples, snr, noise_seed(seed, si))?;
        for (method, table) in methods.iter().zip(&tables) {
            let outcomes = clean
                .frames
                .par_iter()
                .enumerate()
                .map(|(fi, truth)| {
                    let frame = &noisy[truth.start..truth.start + spec.frame_len];
                    let (est, flops) =
                        run_method(method, frame, &inits[fi], partials, &cfg, table.as_ref())?;
                    let score = score_frame(&est, &truth.partials, &cfg, &clean_windowed[fi]);
                    Ok(FrameOutcome { score, flops })
                })
                .collect::<Result<Vec<_>>>()?;

            // Sequential fold in frame order keeps the sums bit-identical.
            let mut total = FrameScore::default();
            let mut flops = 0u64;
            let mut worse_than_zero = 0usize;
            for o in &outcomes {
                total.merge(&o.score);
                flops += o.flops;
                if o.score.recon_sq > o.score.zero_sq {
                    worse_than_zero += 1;
                }
            }
            let frames = outcomes.len();
            rows.push(ReportRow {
                snr_db: snr,
                method: method.label().to_string(),
                iterations: method.iterations(),
                freq_rms: total.freq_rms(),
                amp_rms: total.amp_rms(),
                recon_rms: total.recon_rms(),
                zero_rms: total.zero_rms(),
                outlier_rate: total.outlier_rate(),
                flops_per_frame: flops as f64 / frames as f64,
                frames,
                frames_worse_than_zero: worse_than_zero,
            });
        }
    }
    Ok(ExperimentReport { rows })
}
