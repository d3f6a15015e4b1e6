use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::flops::FlopCounter;
use crate::model::{FrameConfig, SinusoidParams};

/// Oversampled grid of non-modulated sinusoid frequencies.
///
/// The grid step is `pi / (L * P)` and the grid covers (0, pi) exclusive,
/// so it has `L * P - 1` points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dictionary {
    frame_len: usize,
    oversample: usize,
}

impl Dictionary {
    pub fn new(frame_len: usize, oversample: usize) -> Result<Self> {
        if frame_len == 0 || oversample == 0 {
            return Err(Error::InvalidParameter(
                "dictionary needs a positive frame length and oversampling factor".into(),
            ));
        }
        Ok(Self {
            frame_len,
            oversample,
        })
    }

    pub fn frame_len(&self) -> usize {
        self.frame_len
    }

    pub fn oversample(&self) -> usize {
        self.oversample
    }

    pub fn resolution(&self) -> f64 {
        PI / (self.frame_len * self.oversample) as f64
    }

    pub fn grid_len(&self) -> usize {
        self.frame_len * self.oversample - 1
    }

    /// Frequency of grid point `j`, `(j + 1) * resolution`.
    pub fn freq(&self, j: usize) -> f64 {
        (j + 1) as f64 * self.resolution()
    }
}

/// Tabulated windowed atoms for one frame geometry.
///
/// With the centred time axis the windowed cosine is even and the windowed
/// sine is odd, so the pair at any frequency is exactly orthogonal and its
/// 2x2 Gram matrix is diagonal. Only the upper half of each atom is stored.
#[derive(Debug, Clone)]
pub struct AtomTable {
    dict: Dictionary,
    half: usize,
    cos_half: Vec<f64>,
    sin_half: Vec<f64>,
    inv_cos_energy: Vec<f64>,
    inv_sin_energy: Vec<f64>,
}

impl AtomTable {
    pub fn new(dict: Dictionary, cfg: &FrameConfig) -> Result<Self> {
        if dict.frame_len() != cfg.frame_len() {
            return Err(Error::LengthMismatch {
                expected: cfg.frame_len(),
                actual: dict.frame_len(),
            });
        }
        let half = cfg.half_len();
        let grid = dict.grid_len();
        let window = &cfg.window()[half..];
        let times = &cfg.time_index()[half..];
        let mut cos_half = vec![0.0; grid * half];
        let mut sin_half = vec![0.0; grid * half];
        let mut inv_cos_energy = vec![0.0; grid];
        let mut inv_sin_energy = vec![0.0; grid];
        cos_half
            .par_chunks_mut(half)
            .zip(sin_half.par_chunks_mut(half))
            .zip(
                inv_cos_energy
                    .par_iter_mut()
                    .zip(inv_sin_energy.par_iter_mut()),
            )
            .enumerate()
            .for_each(|(j, ((gc, gs), (ic, is)))| {
                let freq = dict.freq(j);
                let (mut ec, mut es) = (0.0, 0.0);
                for m in 0..half {
                    let (s, c) = (freq * times[m]).sin_cos();
                    gc[m] = window[m] * c;
                    gs[m] = window[m] * s;
                    ec += gc[m] * gc[m];
                    es += gs[m] * gs[m];
                }
                *ic = 1.0 / (2.0 * ec);
                *is = 1.0 / (2.0 * es);
            });
        Ok(Self {
            dict,
            half,
            cos_half,
            sin_half,
            inv_cos_energy,
            inv_sin_energy,
        })
    }

    pub fn dictionary(&self) -> &Dictionary {
        &self.dict
    }

    /// Greedy pursuit of `partials` atoms over the raw frame `x`.
    pub fn pursue(&self, x: &[f64], cfg: &FrameConfig, partials: usize) -> Result<MpResult> {
        if partials == 0 {
            return Err(Error::NoPartials);
        }
        let xh = cfg.apply_window(x)?;
        let half = self.half;
        let mut flops = FlopCounter::new();
        flops.add(xh.len());
        // Folded residual, as in the even/odd Gauss-Seidel path.
        let mut even: Vec<f64> = (0..half).map(|m| xh[half + m] + xh[half - 1 - m]).collect();
        let mut odd: Vec<f64> = (0..half).map(|m| xh[half + m] - xh[half - 1 - m]).collect();
        flops.add(2 * half);
        let energy = |e: &[f64], o: &[f64]| {
            0.5 * (e.iter().map(|v| v * v).sum::<f64>() + o.iter().map(|v| v * v).sum::<f64>())
        };

        let mut atoms = Vec::with_capacity(partials);
        let mut residual_energy = vec![energy(&even, &odd)];
        for _ in 0..partials {
            let (best, _) = (0..self.dict.grid_len())
                .into_par_iter()
                .map(|j| (j, self.score(j, &even, &odd)))
                .reduce(
                    || (usize::MAX, f64::NEG_INFINITY),
                    |a, b| {
                        if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
                            b
                        } else {
                            a
                        }
                    },
                );
            flops.add(self.dict.grid_len() * (4 * half + 5));

            let gc = self.cos_atom(best);
            let gs = self.sin_atom(best);
            let a = dot(gc, &even) * self.inv_cos_energy[best];
            let b = dot(gs, &odd) * self.inv_sin_energy[best];
            for m in 0..half {
                even[m] -= 2.0 * a * gc[m];
                odd[m] -= 2.0 * b * gs[m];
            }
            flops.add(2 * (2 * half + 1) + 2 * (2 * half + 1));

            let amp = (a * a + b * b).sqrt();
            let phase = if amp > 0.0 { (-b).atan2(a) } else { 0.0 };
            atoms.push(SinusoidParams::new(amp, self.dict.freq(best), phase, 0.0));
            residual_energy.push(energy(&even, &odd));
        }

        Ok(MpResult {
            atoms,
            residual_energy,
            flops: flops.total(),
        })
    }

    fn cos_atom(&self, j: usize) -> &[f64] {
        &self.cos_half[j * self.half..(j + 1) * self.half]
    }

    fn sin_atom(&self, j: usize) -> &[f64] {
        &self.sin_half[j * self.half..(j + 1) * self.half]
    }

    /// Energy the (cos, sin) pair at grid point `j` would remove.
    fn score(&self, j: usize, even: &[f64], odd: &[f64]) -> f64 {
        let pc = dot(self.cos_atom(j), even);
        let ps = dot(self.sin_atom(j), odd);
        let s = pc * pc * self.inv_cos_energy[j] + ps * ps * self.inv_sin_energy[j];
        if s.is_nan() {
            f64::NEG_INFINITY
        } else {
            s
        }
    }
}

/// One recovered matching-pursuit atom.
pub type MpAtom = SinusoidParams;

#[derive(Debug, Clone, PartialEq)]
pub struct MpResult {
    /// Atoms in selection order; `amp_slope` is always zero.
    pub atoms: Vec<MpAtom>,
    /// Residual energy before the first round and after each round.
    pub residual_energy: Vec<f64>,
    pub flops: u64,
}

/// Matching pursuits over `dict` for `partials` rounds. Tabulates the
/// dictionary on every call; use [`AtomTable::pursue`] to reuse it across
/// frames.
pub fn matching_pursuit(
    x: &[f64],
    cfg: &FrameConfig,
    dict: &Dictionary,
    partials: usize,
) -> Result<MpResult> {
    AtomTable::new(*dict, cfg)?.pursue(x, cfg, partials)
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{make_frame_config, synthesize};

    #[test]
    fn grid_matches_resolution() {
        let d = Dictionary::new(256, 32).unwrap();
        assert_eq!(d.resolution(), PI / 8192.0);
        assert_eq!(d.grid_len(), 8191);
        assert_eq!(d.freq(0), PI / 8192.0);
        assert!(d.freq(d.grid_len() - 1) < PI);
        assert!(Dictionary::new(256, 0).is_err());
    }

    #[test]
    fn on_grid_atom_recovered_exactly() {
        let cfg = make_frame_config(64).unwrap();
        let dict = Dictionary::new(64, 4).unwrap();
        let p = SinusoidParams::new(0.8, dict.freq(40), 1.1, 0.0);
        let x = synthesize(&[p], &cfg, false);
        let r = matching_pursuit(&x, &cfg, &dict, 1).unwrap();
        let a = r.atoms[0];
        assert_eq!(a.freq, p.freq);
        assert!((a.amp - 0.8).abs() < 1e-8);
        assert!((a.phase - 1.1).abs() < 1e-8);
        assert!(r.residual_energy[1] <= 1e-10 * r.residual_energy[0]);
    }

    #[test]
    fn two_orthogonal_atoms_in_amplitude_order() {
        let cfg = make_frame_config(128).unwrap();
        let dict = Dictionary::new(128, 2).unwrap();
        // Bins 10 and 40 of the DFT grid: grid indices 2*10-1 and 2*40-1.
        let weak = SinusoidParams::new(0.4, dict.freq(19), -0.5, 0.0);
        let strong = SinusoidParams::new(1.0, dict.freq(79), 0.7, 0.0);
        let x = synthesize(&[weak, strong], &cfg, false);
        let r = matching_pursuit(&x, &cfg, &dict, 2).unwrap();
        assert_eq!(r.atoms[0].freq, strong.freq);
        assert_eq!(r.atoms[1].freq, weak.freq);
        assert!((r.atoms[0].amp - 1.0).abs() < 1e-3);
        assert!((r.atoms[1].amp - 0.4).abs() < 1e-3);
    }

    #[test]
    fn residual_energy_never_grows() {
        let cfg = make_frame_config(64).unwrap();
        let dict = Dictionary::new(64, 8).unwrap();
        let x: Vec<f64> = (0..64).map(|n| ((n * 29) % 11) as f64 - 5.0).collect();
        let r = matching_pursuit(&x, &cfg, &dict, 10).unwrap();
        for pair in r.residual_energy.windows(2) {
            assert!(pair[1] <= pair[0] * (1.0 + 1e-12));
        }
    }

    #[test]
    fn silent_frame_gives_zero_atoms() {
        let cfg = make_frame_config(32).unwrap();
        let dict = Dictionary::new(32, 2).unwrap();
        let r = matching_pursuit(&[0.0; 32], &cfg, &dict, 2).unwrap();
        assert!(r.atoms.iter().all(|a| a.amp == 0.0));
        assert_eq!(r.atoms[0].freq, dict.freq(0));
    }
}
