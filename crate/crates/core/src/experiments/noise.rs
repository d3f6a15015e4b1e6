use std::cmp::Ordering;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Adds white Gaussian noise at `snr_db` over the whole signal.
///
/// The realised noise is rescaled so that
/// `10 log10(signal_energy / noise_energy)` equals `snr_db` exactly.
/// `f64::INFINITY` returns the signal unchanged. The noise sequence is a
/// pure function of `seed`.
pub fn add_noise(signal: &[f64], snr_db: f64, seed: u64) -> Result<Vec<f64>> {
    if snr_db == f64::INFINITY {
        return Ok(signal.to_vec());
    }
    if !snr_db.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "SNR {snr_db} dB is not usable"
        )));
    }
    let signal_energy: f64 = signal.iter().map(|v| v * v).sum();
    if signal_energy.partial_cmp(&0.0) != Some(Ordering::Greater) {
        return Err(Error::ZeroEnergySignal);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise: Vec<f64> = (0..signal.len())
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    let noise_energy: f64 = noise.iter().map(|v| v * v).sum();
    let target = signal_energy / 10f64.powf(snr_db / 10.0);
    let scale = (target / noise_energy).sqrt();
    Ok(signal
        .iter()
        .zip(&noise)
        .map(|(s, n)| s + scale * n)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tone(len: usize) -> Vec<f64> {
        (0..len).map(|n| (0.3 * n as f64).cos()).collect()
    }

    #[test]
    fn clean_is_identity() {
        let s = tone(100);
        assert_eq!(add_noise(&s, f64::INFINITY, 5).unwrap(), s);
    }

    #[test]
    fn measured_snr_matches_request() {
        let s = tone(48_000);
        for snr in [0.0, -10.0, 20.0] {
            let y = add_noise(&s, snr, 9).unwrap();
            let es: f64 = s.iter().map(|v| v * v).sum();
            let en: f64 = y.iter().zip(&s).map(|(a, b)| (a - b) * (a - b)).sum();
            assert!((10.0 * (es / en).log10() - snr).abs() < 0.1);
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let s = tone(1000);
        assert_eq!(
            add_noise(&s, 3.0, 77).unwrap(),
            add_noise(&s, 3.0, 77).unwrap()
        );
        assert_ne!(
            add_noise(&s, 3.0, 77).unwrap(),
            add_noise(&s, 3.0, 78).unwrap()
        );
    }

    #[test]
    fn silent_signal_rejected() {
        assert_eq!(add_noise(&[0.0; 10], 0.0, 1), Err(Error::ZeroEnergySignal));
        assert!(add_noise(&tone(10), f64::NAN, 1).is_err());
    }
}
