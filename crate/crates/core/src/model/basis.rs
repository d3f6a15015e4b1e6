use std::f64::consts::{FRAC_PI_2, PI};

use super::frame::FrameConfig;
use super::params::LinWeights;
use crate::error::{Error, Result};
use crate::flops::FlopCounter;

/// Frequencies closer than this are treated as duplicates.
pub const DUPLICATE_FREQ_TOL: f64 = 1e-9;

/// Which of the four per-partial basis functions a column holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnKind {
    /// `h(t) cos(theta t)`
    Cos,
    /// `h(t) sin(theta t)`
    Sin,
    /// `h(t) t cos(theta t)`
    RampCos,
    /// `h(t) t sin(theta t)`
    RampSin,
}

impl ColumnKind {
    pub const ALL: [ColumnKind; 4] = [Self::Cos, Self::Sin, Self::RampCos, Self::RampSin];

    pub fn parity(self) -> Parity {
        match self {
            Self::Cos | Self::RampSin => Parity::Even,
            Self::Sin | Self::RampCos => Parity::Odd,
        }
    }
}

/// Symmetry of a column about the frame centre.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

/// The `4N` windowed basis columns for a set of expansion frequencies.
///
/// Columns are ordered `[cos.., sin.., t cos.., t sin..]`, ascending partial
/// index within each type, and are stored normalised to unit Euclidean
/// norm. The norms before normalisation are kept in `col_norms`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSet {
    freqs: Vec<f64>,
    frame_len: usize,
    /// Column-major, `4N * L` samples.
    columns: Vec<f64>,
    col_norms: Vec<f64>,
}

/// Builds and normalises the basis for `freqs`.
pub fn build_basis(freqs: &[f64], cfg: &FrameConfig) -> Result<BasisSet> {
    build_basis_counted(freqs, cfg, &mut FlopCounter::new())
}

/// [`build_basis`] with arithmetic tallied into `flops`.
///
/// Only the upper half of each column is computed; the lower half follows
/// from its parity. For each partial one of the `cos`/`sin` norms and one
/// of the ramp norms is summed directly and the other is derived from the
/// frame constants `sum h^2` and `sum t^2 h^2`, picking the smaller one to
/// sum so the subtraction never cancels.
pub fn build_basis_counted(
    freqs: &[f64],
    cfg: &FrameConfig,
    flops: &mut FlopCounter,
) -> Result<BasisSet> {
    validate_freqs(freqs, cfg.frame_len())?;

    let n = freqs.len();
    let len = cfg.frame_len();
    let half = cfg.half_len();
    let window = &cfg.window()[half..];
    let times = &cfg.time_index()[half..];
    let mut columns = vec![0.0; 4 * n * len];
    let mut col_norms = vec![0.0; 4 * n];

    let mut upper = [
        vec![0.0; half],
        vec![0.0; half],
        vec![0.0; half],
        vec![0.0; half],
    ];
    for (k, &theta) in freqs.iter().enumerate() {
        for m in 0..half {
            let (sin_t, cos_t) = (theta * times[m]).sin_cos();
            let hc = window[m] * cos_t;
            let hs = window[m] * sin_t;
            upper[0][m] = hc;
            upper[1][m] = hs;
            upper[2][m] = times[m] * hc;
            upper[3][m] = times[m] * hs;
        }
        flops.add(4 * half);

        let energy = |v: &[f64]| 2.0 * v.iter().map(|x| x * x).sum::<f64>();
        // Sum the columns expected to be small; derive their complements.
        let (summed, derived) = if theta < FRAC_PI_2 {
            ([1, 3], [0, 2])
        } else {
            ([0, 2], [1, 3])
        };
        let totals = [cfg.window_energy(), cfg.ramp_energy()];
        let mut energies = [0.0; 4];
        for pair in 0..2 {
            let direct = energy(&upper[summed[pair]]);
            flops.dot(half);
            energies[summed[pair]] = direct;
            let complement = totals[pair] - direct;
            flops.add(1);
            energies[derived[pair]] = if complement > 1e-2 * totals[pair] {
                complement
            } else {
                flops.dot(half);
                energy(&upper[derived[pair]])
            };
        }

        for (kind_idx, kind) in ColumnKind::ALL.iter().enumerate() {
            let norm = energies[kind_idx].sqrt();
            let inv = 1.0 / norm;
            flops.add(2 + half);
            let col = kind_idx * n + k;
            col_norms[col] = norm;
            let sign = kind.parity().sign();
            let dst = &mut columns[col * len..(col + 1) * len];
            for m in 0..half {
                let v = upper[kind_idx][m] * inv;
                dst[half + m] = v;
                dst[half - 1 - m] = sign * v;
            }
        }
    }

    Ok(BasisSet {
        freqs: freqs.to_vec(),
        frame_len: len,
        columns,
        col_norms,
    })
}

fn validate_freqs(freqs: &[f64], frame_len: usize) -> Result<()> {
    if freqs.is_empty() {
        return Err(Error::NoPartials);
    }
    for (index, &freq) in freqs.iter().enumerate() {
        if !(freq > 0.0 && freq < PI) {
            return Err(Error::FrequencyOutOfRange { index, freq });
        }
    }
    if 4 * freqs.len() > frame_len {
        return Err(Error::Underdetermined {
            partials: freqs.len(),
            columns: 4 * freqs.len(),
            frame_len,
        });
    }
    let mut order: Vec<usize> = (0..freqs.len()).collect();
    order.sort_by(|&a, &b| freqs[a].total_cmp(&freqs[b]));
    for pair in order.windows(2) {
        if freqs[pair[1]] - freqs[pair[0]] < DUPLICATE_FREQ_TOL {
            let (first, second) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            return Err(Error::DuplicateFrequency { first, second });
        }
    }
    Ok(())
}

impl BasisSet {
    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    pub fn num_partials(&self) -> usize {
        self.freqs.len()
    }

    pub fn num_columns(&self) -> usize {
        4 * self.freqs.len()
    }

    pub fn frame_len(&self) -> usize {
        self.frame_len
    }

    pub fn col_norms(&self) -> &[f64] {
        &self.col_norms
    }

    /// Normalised column `j`.
    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j * self.frame_len..(j + 1) * self.frame_len]
    }

    /// Upper half (`t > 0`) of normalised column `j`.
    pub fn half_column(&self, j: usize) -> &[f64] {
        let half = self.frame_len / 2;
        &self.column(j)[half..]
    }

    pub fn kind(&self, j: usize) -> ColumnKind {
        ColumnKind::ALL[j / self.num_partials()]
    }

    pub fn partial_of(&self, j: usize) -> usize {
        j % self.num_partials()
    }

    pub fn parity(&self, j: usize) -> Parity {
        self.kind(j).parity()
    }

    /// Column index of `kind` for partial `k`.
    pub fn index(&self, kind: ColumnKind, k: usize) -> usize {
        let slot = ColumnKind::ALL.iter().position(|&c| c == kind).unwrap();
        slot * self.num_partials() + k
    }

    /// Converts weights on the normalised columns to weights on the raw
    /// (unnormalised) basis functions.
    pub fn denormalize(&self, w: &LinWeights) -> LinWeights {
        let flat: Vec<f64> = w
            .to_flat()
            .iter()
            .zip(&self.col_norms)
            .map(|(v, norm)| v / norm)
            .collect();
        LinWeights::from_flat(&flat)
    }

    /// Inverse of [`BasisSet::denormalize`].
    pub fn normalize(&self, w: &LinWeights) -> LinWeights {
        let flat: Vec<f64> = w
            .to_flat()
            .iter()
            .zip(&self.col_norms)
            .map(|(v, norm)| v * norm)
            .collect();
        LinWeights::from_flat(&flat)
    }

    /// `A w` for weights in normalised space.
    pub fn reconstruct(&self, w: &LinWeights) -> Vec<f64> {
        let flat = w.to_flat();
        assert_eq!(flat.len(), self.num_columns());
        let mut out = vec![0.0; self.frame_len];
        for (j, &wj) in flat.iter().enumerate() {
            if wj != 0.0 {
                for (o, a) in out.iter_mut().zip(self.column(j)) {
                    *o += wj * a;
                }
            }
        }
        out
    }

    /// `A^T x`.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        (0..self.num_columns())
            .map(|j| dot(self.column(j), x))
            .collect()
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
