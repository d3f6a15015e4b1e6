use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A sum of linear chirps cut into analysis frames.
#[derive(Debug, Clone, PartialEq)]
pub struct ChirpSpec {
    /// Instantaneous frequency at sample 0, rad/sample.
    pub start_freqs: Vec<f64>,
    /// Instantaneous frequency at sample `duration`, rad/sample.
    pub end_freqs: Vec<f64>,
    /// Level of each chirp relative to 1.0, in dB.
    pub amps_db: Vec<f64>,
    /// Total length in samples.
    pub duration: usize,
    pub frame_len: usize,
    pub hop: usize,
}

impl Default for ChirpSpec {
    /// Five chirps 0.05..0.25 -> 2.0..2.8 rad/sample at 0, -3, .., -12 dB,
    /// one second at 48 kHz, 256-sample frames every 192 samples.
    fn default() -> Self {
        Self {
            start_freqs: vec![0.05, 0.1, 0.15, 0.2, 0.25],
            end_freqs: vec![2.0, 2.2, 2.4, 2.6, 2.8],
            amps_db: vec![0.0, -3.0, -6.0, -9.0, -12.0],
            duration: 48_000,
            frame_len: 256,
            hop: 192,
        }
    }
}

impl ChirpSpec {
    pub fn validate(&self) -> Result<()> {
        let n = self.start_freqs.len();
        if n == 0 {
            return Err(Error::NoPartials);
        }
        if self.end_freqs.len() != n || self.amps_db.len() != n {
            return Err(Error::InvalidParameter(
                "start, end and level lists must have equal length".into(),
            ));
        }
        for (index, &freq) in self.start_freqs.iter().chain(&self.end_freqs).enumerate() {
            if !(freq > 0.0 && freq < PI) {
                return Err(Error::FrequencyOutOfRange {
                    index: index % n,
                    freq,
                });
            }
        }
        if self.amps_db.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidParameter(
                "chirp levels must be finite".into(),
            ));
        }
        if self.frame_len < 8 || !self.frame_len.is_multiple_of(2) {
            return Err(Error::InvalidFrameLength(self.frame_len));
        }
        if self.hop == 0 {
            return Err(Error::InvalidParameter("hop must be at least 1".into()));
        }
        if self.duration < self.frame_len {
            return Err(Error::InvalidParameter(format!(
                "duration {} is shorter than one frame of {}",
                self.duration, self.frame_len
            )));
        }
        Ok(())
    }

    /// First sample of every complete frame.
    pub fn frame_starts(&self) -> Vec<usize> {
        if self.duration < self.frame_len || self.hop == 0 {
            return Vec::new();
        }
        (0..=(self.duration - self.frame_len) / self.hop)
            .map(|i| i * self.hop)
            .collect()
    }

    pub fn amplitudes(&self) -> Vec<f64> {
        self.amps_db
            .iter()
            .map(|db| 10f64.powf(db / 20.0))
            .collect()
    }

    /// Instantaneous frequency of chirp `k` at (possibly fractional) sample
    /// time `tau`.
    pub fn inst_freq(&self, k: usize, tau: f64) -> f64 {
        let (f0, f1) = (self.start_freqs[k], self.end_freqs[k]);
        f0 + (f1 - f0) * tau / self.duration as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruthPartial {
    pub freq: f64,
    pub amp: f64,
}

/// Ground truth at the centre of one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameTruth {
    pub start: usize,
    pub partials: Vec<TruthPartial>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChirpSignal {
    pub samples: Vec<f64>,
    /// Phase of each chirp at sample 0.
    pub initial_phases: Vec<f64>,
    pub frames: Vec<FrameTruth>,
}

impl ChirpSignal {
    pub fn frame(&self, truth: &FrameTruth, frame_len: usize) -> &[f64] {
        &self.samples[truth.start..truth.start + frame_len]
    }
}

/// Generates the chirp mixture with initial phases drawn uniformly from
/// (-pi, pi] under `seed`, plus per-frame truth (instantaneous frequency and
/// amplitude at the frame centre, `start + (L - 1) / 2`).
pub fn gen_chirps(spec: &ChirpSpec, seed: u64) -> Result<ChirpSignal> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let initial_phases: Vec<f64> = spec
        .start_freqs
        .iter()
        .map(|_| PI - rng.random::<f64>() * 2.0 * PI)
        .collect();
    let amps = spec.amplitudes();
    let d = spec.duration as f64;

    let samples: Vec<f64> = (0..spec.duration)
        .map(|n| {
            let tau = n as f64;
            (0..amps.len())
                .map(|k| {
                    let (f0, f1) = (spec.start_freqs[k], spec.end_freqs[k]);
                    // Closed-form integral of the linear frequency sweep.
                    let phase = initial_phases[k] + f0 * tau + 0.5 * (f1 - f0) * tau * tau / d;
                    amps[k] * phase.cos()
                })
                .sum()
        })
        .collect();

    let centre = (spec.frame_len as f64 - 1.0) / 2.0;
    let frames = spec
        .frame_starts()
        .into_iter()
        .map(|start| FrameTruth {
            start,
            partials: (0..amps.len())
                .map(|k| TruthPartial {
                    freq: spec.inst_freq(k, start as f64 + centre),
                    amp: amps[k],
                })
                .collect(),
        })
        .collect();

    Ok(ChirpSignal {
        samples,
        initial_phases,
        frames,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_chirp_has_constant_truth() {
        let spec = ChirpSpec {
            start_freqs: vec![0.1 * PI],
            end_freqs: vec![0.1 * PI],
            amps_db: vec![0.0],
            duration: 4096,
            ..ChirpSpec::default()
        };
        let sig = gen_chirps(&spec, 1).unwrap();
        assert!(sig.frames.iter().all(|f| f.partials[0].freq == 0.1 * PI));
        // Sample-to-sample phase advance is the constant frequency.
        let phi = sig.initial_phases[0];
        for n in [0usize, 17, 4000] {
            let expected = (phi + 0.1 * PI * n as f64).cos();
            assert!((sig.samples[n] - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn default_levels() {
        let amps = ChirpSpec::default().amplitudes();
        assert_eq!(amps[0], 1.0);
        assert!((amps[4] / amps[0] - 0.251188643150958).abs() < 1e-12);
    }

    #[test]
    fn frame_centre_truth_is_linear_sweep() {
        let spec = ChirpSpec {
            start_freqs: vec![0.05],
            end_freqs: vec![2.0],
            amps_db: vec![0.0],
            ..ChirpSpec::default()
        };
        let sig = gen_chirps(&spec, 3).unwrap();
        assert_eq!(sig.frames.len(), (48_000 - 256) / 192 + 1);
        for f in &sig.frames {
            let mid = f.start as f64 + 127.5;
            let expected = 0.05 + (2.0 - 0.05) * (mid / 48_000.0);
            assert!((f.partials[0].freq - expected).abs() <= 1e-12);
        }
    }

    #[test]
    fn rejects_bad_specs() {
        let mut spec = ChirpSpec::default();
        spec.end_freqs[2] = PI;
        assert!(matches!(
            gen_chirps(&spec, 0),
            Err(Error::FrequencyOutOfRange { index: 2, .. })
        ));
        let mut spec = ChirpSpec::default();
        spec.amps_db.pop();
        assert!(gen_chirps(&spec, 0).is_err());
        let spec = ChirpSpec {
            duration: 100,
            ..ChirpSpec::default()
        };
        assert!(gen_chirps(&spec, 0).is_err());
        let spec = ChirpSpec {
            hop: 0,
            ..ChirpSpec::default()
        };
        assert!(gen_chirps(&spec, 0).is_err());
    }

    #[test]
    fn phases_depend_only_on_seed() {
        let spec = ChirpSpec {
            duration: 1024,
            ..ChirpSpec::default()
        };
        let a = gen_chirps(&spec, 42).unwrap();
        let b = gen_chirps(&spec, 42).unwrap();
        let c = gen_chirps(&spec, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.initial_phases, c.initial_phases);
        assert!(a.initial_phases.iter().all(|p| *p > -PI && *p <= PI));
    }
}
