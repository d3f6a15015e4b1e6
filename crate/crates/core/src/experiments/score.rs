use super::chirp::TruthPartial;
use crate::model::{synthesize, FrameConfig, SinusoidParams};

/// Squared-error sums for one frame. Sums, not means, so frames aggregate
/// by plain addition.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FrameScore {
    /// Sum of squared frequency errors over matched partials.
    pub freq_sq: f64,
    /// Sum of squared amplitude errors over matched partials.
    pub amp_sq: f64,
    pub matched: usize,
    /// True partials with no estimate within one DFT bin.
    pub outliers: usize,
    /// `||clean_h - synth_h(estimates)||^2`.
    pub recon_sq: f64,
    /// `||clean_h||^2`, the error of predicting silence.
    pub zero_sq: f64,
    pub samples: usize,
}

impl FrameScore {
    pub fn merge(&mut self, other: &FrameScore) {
        self.freq_sq += other.freq_sq;
        self.amp_sq += other.amp_sq;
        self.matched += other.matched;
        self.outliers += other.outliers;
        self.recon_sq += other.recon_sq;
        self.zero_sq += other.zero_sq;
        self.samples += other.samples;
    }

    pub fn freq_rms(&self) -> f64 {
        rms(self.freq_sq, self.matched)
    }

    pub fn amp_rms(&self) -> f64 {
        rms(self.amp_sq, self.matched)
    }

    pub fn recon_rms(&self) -> f64 {
        rms(self.recon_sq, self.samples)
    }

    pub fn zero_rms(&self) -> f64 {
        rms(self.zero_sq, self.samples)
    }

    pub fn outlier_rate(&self) -> f64 {
        let total = self.matched + self.outliers;
        if total == 0 {
            0.0
        } else {
            self.outliers as f64 / total as f64
        }
    }
}

fn rms(sum_sq: f64, count: usize) -> f64 {
    if count == 0 {
        0.0
    } else {
        (sum_sq / count as f64).sqrt()
    }
}

/// Scores one frame of estimates against the truth.
///
/// Estimates are matched to true partials greedily, closest pair first
/// (ties go to the lower truth index, then the lower estimate index). A
/// true partial whose best available estimate lies more than one DFT bin
/// `2 pi / L` away is an outlier and contributes nothing to the frequency
/// and amplitude sums. The reconstruction error compares the windowed
/// resynthesis of all estimates with `clean_windowed`.
pub fn score_frame(
    estimates: &[SinusoidParams],
    truth: &[TruthPartial],
    cfg: &FrameConfig,
    clean_windowed: &[f64],
) -> FrameScore {
    let mut pairs: Vec<(f64, usize, usize)> = truth
        .iter()
        .enumerate()
        .flat_map(|(k, tp)| {
            estimates
                .iter()
                .enumerate()
                .map(move |(i, e)| ((e.freq - tp.freq).abs(), k, i))
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let bin = cfg.bin_width();
    let mut truth_used = vec![false; truth.len()];
    let mut est_used = vec![false; estimates.len()];
    let mut score = FrameScore::default();
    for (dist, k, i) in pairs {
        if truth_used[k] || est_used[i] || dist > bin {
            continue;
        }
        truth_used[k] = true;
        est_used[i] = true;
        score.matched += 1;
        score.freq_sq += dist * dist;
        let da = estimates[i].amp - truth[k].amp;
        score.amp_sq += da * da;
    }
    score.outliers = truth.len() - score.matched;

    let resynth = synthesize(estimates, cfg, true);
    score.recon_sq = resynth
        .iter()
        .zip(clean_windowed)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    score.zero_sq = clean_windowed.iter().map(|v| v * v).sum();
    score.samples = clean_windowed.len();
    score
}
