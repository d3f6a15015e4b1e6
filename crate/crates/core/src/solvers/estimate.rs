use std::f64::consts::PI;

use super::gauss_seidel::{solve_gauss_seidel_evenodd, sweep_split, SplitResidual, SweepOrder};
use super::SolveTrace;
use crate::error::{Error, Result};
use crate::flops::FlopCounter;
use crate::model::{
    build_basis_counted, params_from_weights, synthesize, FrameConfig, LinWeights, PartialWeights,
    SinusoidParams, DUPLICATE_FREQ_TOL,
};

/// Updated frequencies are kept inside `[FREQ_MARGIN, pi - FREQ_MARGIN]`.
pub const FREQ_MARGIN: f64 = 1e-4;

/// Amplitude below which a partial counts as vanished:
/// `1e-12 * ||x_h|| / sqrt(L)`.
pub fn amp_floor(windowed_energy: f64, frame_len: usize) -> f64 {
    1e-12 * (windowed_energy / frame_len as f64).sqrt()
}

/// Output of [`estimate_linear`].
#[derive(Debug, Clone, PartialEq)]
pub struct LinearEstimate {
    /// Recovered partials; `freq` already includes `dtheta`.
    pub params: Vec<SinusoidParams>,
    pub dtheta: Vec<f64>,
    pub vanished: Vec<bool>,
    /// Gauss-Seidel trace; `flops` covers the whole estimate.
    pub trace: SolveTrace,
}

/// A frequency update that was clamped or held back.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClampEvent {
    pub iteration: usize,
    pub partial: usize,
    /// The frequency the update asked for.
    pub requested: f64,
    /// The frequency kept.
    pub applied: f64,
}

/// Output of [`estimate_nonlinear`].
#[derive(Debug, Clone, PartialEq)]
pub struct NonlinearResult {
    pub params: Vec<SinusoidParams>,
    /// `residual_energy[i]` is `||x_h - synth(params_i)||^2` after outer
    /// iteration `i`; `flops` covers the whole estimate.
    pub trace: SolveTrace,
    /// Frequencies before the first iteration and after each one.
    pub freq_history: Vec<Vec<f64>>,
    pub vanished: Vec<bool>,
    pub clamp_events: Vec<ClampEvent>,
}

/// Linear estimator: one basis at `theta_init`, `iters` even/odd
/// Gauss-Seidel sweeps, then amplitude, phase, slope and frequency
/// correction recovered from the weights.
pub fn estimate_linear(
    x: &[f64],
    theta_init: &[f64],
    cfg: &FrameConfig,
    iters: usize,
) -> Result<LinearEstimate> {
    let mut flops = FlopCounter::new();
    let xh = cfg.apply_window(x)?;
    flops.add(xh.len());
    let basis = build_basis_counted(theta_init, cfg, &mut flops)?;
    let mut trace = solve_gauss_seidel_evenodd(&basis, &xh, iters)?;
    flops.add(trace.flops as usize);

    let raw = basis.denormalize(&trace.weights);
    flops.add(basis.num_columns());
    let floor = amp_floor(trace.residual_energy[0], cfg.frame_len());

    let n = theta_init.len();
    let mut params = Vec::with_capacity(n);
    let mut dtheta = Vec::with_capacity(n);
    let mut vanished = Vec::with_capacity(n);
    for (k, &theta) in theta_init.iter().enumerate() {
        let rec = params_from_weights(&raw.partial(k), theta, floor);
        flops.add(RECOVERY_OPS);
        let mut p = rec.params;
        p.freq = clamp_freq(theta + rec.dtheta);
        flops.add(1);
        params.push(p);
        dtheta.push(rec.dtheta);
        vanished.push(rec.vanished);
    }

    trace.flops = flops.total();
    Ok(LinearEstimate {
        params,
        dtheta,
        vanished,
        trace,
    })
}

/// Non-linear estimator: each outer iteration rebuilds the basis at the
/// current frequencies, re-expresses the current amplitudes, phases and
/// slopes as weights on it, recomputes the residual, runs one Gauss-Seidel
/// sweep and moves every frequency by `alpha` times its recovered
/// correction.
///
/// Frequencies are clamped to `[FREQ_MARGIN, pi - FREQ_MARGIN]`; an update
/// that would land within `1e-9` of another partial is held back. Both are
/// reported in `clamp_events`. A partial whose amplitude vanishes keeps its
/// frequency from then on.
pub fn estimate_nonlinear(
    x: &[f64],
    theta_init: &[f64],
    cfg: &FrameConfig,
    iters: usize,
    alpha: f64,
) -> Result<NonlinearResult> {
    if iters == 0 {
        return Err(Error::InvalidParameter(
            "at least one outer iteration is required".into(),
        ));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha {alpha} must lie in (0, 1]"
        )));
    }
    let n = theta_init.len();
    let mut flops = FlopCounter::new();
    let xh = cfg.apply_window(x)?;
    flops.add(xh.len());
    let input = SplitResidual::from_frame(&xh, &mut flops);
    let initial_energy = input.energy();
    let floor = amp_floor(initial_energy, cfg.frame_len());
    let order = SweepOrder::Grouped.indices(n);

    let mut theta = theta_init.to_vec();
    let mut params: Vec<SinusoidParams> = theta
        .iter()
        .map(|&freq| SinusoidParams {
            freq,
            ..SinusoidParams::default()
        })
        .collect();
    let mut vanished = vec![false; n];
    let mut clamp_events = Vec::new();
    let mut freq_history = vec![theta.clone()];
    let mut residual_energy = vec![initial_energy];
    let mut weights = LinWeights::zeros(n);

    for iteration in 1..=iters {
        // Current parameters as weights on the new basis; the frequency
        // offset is already folded into theta.
        let mut raw = LinWeights::zeros(n);
        for (k, p) in params.iter().enumerate() {
            let (sin_p, cos_p) = p.phase.sin_cos();
            raw.set_partial(
                k,
                PartialWeights {
                    c: p.amp * cos_p,
                    s: -p.amp * sin_p,
                    d: p.amp_slope * cos_p,
                    t: -p.amp_slope * sin_p,
                },
            );
        }
        flops.add(4 * n);

        let basis = build_basis_counted(&theta, cfg, &mut flops)?;
        let mut w = basis.normalize(&raw).to_flat();
        flops.add(w.len());

        let mut residual = input.clone();
        for (j, &wj) in w.iter().enumerate() {
            if wj != 0.0 {
                residual.subtract(&basis, j, wj, &mut flops);
            }
        }
        sweep_split(&basis, &mut residual, &mut w, &order, &mut flops, None);

        weights = LinWeights::from_flat(&w);
        let raw = basis.denormalize(&weights);
        flops.add(w.len());
        for k in 0..n {
            let rec = params_from_weights(&raw.partial(k), theta[k], floor);
            flops.add(RECOVERY_OPS);
            if rec.vanished {
                vanished[k] = true;
            }
            if !vanished[k] {
                let requested = theta[k] + alpha * rec.dtheta;
                flops.add(2);
                let mut applied = clamp_freq(requested);
                let collides = theta
                    .iter()
                    .enumerate()
                    .any(|(j, &other)| j != k && (applied - other).abs() < DUPLICATE_FREQ_TOL);
                if collides {
                    applied = theta[k];
                }
                if applied != requested {
                    clamp_events.push(ClampEvent {
                        iteration,
                        partial: k,
                        requested,
                        applied,
                    });
                }
                theta[k] = applied;
            }
            params[k] = SinusoidParams {
                freq: theta[k],
                ..rec.params
            };
        }

        freq_history.push(theta.clone());
        let fit = synthesize(&params, cfg, true);
        residual_energy.push(fit.iter().zip(&xh).map(|(a, b)| (b - a) * (b - a)).sum());
    }

    Ok(NonlinearResult {
        params,
        trace: SolveTrace {
            residual_energy,
            weights,
            iterations: iters,
            flops: flops.total(),
            diverged: false,
            step_energy: Vec::new(),
        },
        freq_history,
        vanished,
        clamp_events,
    })
}

/// sqrt, atan2 and the slope/offset formulas of one partial.
const RECOVERY_OPS: usize = 12;

fn clamp_freq(freq: f64) -> f64 {
    freq.clamp(FREQ_MARGIN, PI - FREQ_MARGIN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::make_frame_config;

    fn single_am_frame(cfg: &FrameConfig) -> Vec<f64> {
        synthesize(&[SinusoidParams::new(1.0, 0.1 * PI, 0.5, 1e-3)], cfg, false)
    }

    #[test]
    fn on_grid_sinusoid_recovered_exactly() {
        let cfg = make_frame_config(256).unwrap();
        let p = SinusoidParams::new(0.9, 0.1 * PI, -1.2, 0.0);
        let x = synthesize(&[p], &cfg, false);
        let est = estimate_linear(&x, &[p.freq], &cfg, 2).unwrap();
        let q = est.params[0];
        assert!((q.amp - 0.9).abs() <= 1e-8);
        assert!((q.phase - -1.2).abs() <= 1e-8);
        assert!(est.dtheta[0].abs() <= 1e-8);
        assert!((q.freq - p.freq).abs() <= 1e-8);
    }

    #[test]
    fn linear_step_reduces_frequency_error() {
        let cfg = make_frame_config(256).unwrap();
        let x = synthesize(&[SinusoidParams::new(1.0, 0.1 * PI, 0.4, 0.0)], &cfg, false);
        let init = 0.105 * PI;
        let est = estimate_linear(&x, &[init], &cfg, 2).unwrap();
        assert!((est.params[0].freq - 0.1 * PI).abs() < (init - 0.1 * PI).abs());
    }

    #[test]
    fn zero_input_vanishes() {
        let cfg = make_frame_config(64).unwrap();
        let est = estimate_linear(&[0.0; 64], &[0.3, 1.0], &cfg, 2).unwrap();
        assert_eq!(est.vanished, vec![true, true]);
        assert!(est.params.iter().all(|p| p.amp == 0.0));
        let nl = estimate_nonlinear(&[0.0; 64], &[0.3, 1.0], &cfg, 3, 1.0).unwrap();
        assert_eq!(nl.vanished, vec![true, true]);
        assert_eq!(nl.params[0].freq, 0.3);
    }

    #[test]
    fn single_outer_iteration_equals_linear() {
        let cfg = make_frame_config(256).unwrap();
        let x = synthesize(
            &[
                SinusoidParams::new(1.0, 0.31, 0.4, 1e-3),
                SinusoidParams::new(0.5, 0.77, -2.0, -1e-3),
            ],
            &cfg,
            false,
        );
        let init = [0.3, 0.78];
        let lin = estimate_linear(&x, &init, &cfg, 1).unwrap();
        let nl = estimate_nonlinear(&x, &init, &cfg, 1, 1.0).unwrap();
        assert_eq!(lin.params, nl.params);
        assert_eq!(lin.trace.weights, nl.trace.weights);
    }

    #[test]
    fn single_am_converges_quickly_with_unit_step() {
        let cfg = make_frame_config(256).unwrap();
        let x = single_am_frame(&cfg);
        let r = estimate_nonlinear(&x, &[0.095 * PI], &cfg, 8, 1.0).unwrap();
        let errs: Vec<f64> = r
            .freq_history
            .iter()
            .map(|f| (f[0] - 0.1 * PI).abs())
            .collect();
        assert!(errs[3] < 1e-7, "{errs:?}");
        assert!(errs[5] < 1e-7, "{errs:?}");
    }

    #[test]
    fn stationary_at_true_frequency() {
        let cfg = make_frame_config(256).unwrap();
        let p = SinusoidParams::new(1.0, 0.9, 0.7, 0.0);
        let x = synthesize(&[p], &cfg, false);
        let r = estimate_nonlinear(&x, &[p.freq], &cfg, 4, 1.0).unwrap();
        for pair in r.freq_history.windows(2) {
            assert!((pair[1][0] - pair[0][0]).abs() < 1e-9);
        }
    }

    #[test]
    fn clamps_at_band_edge() {
        let cfg = make_frame_config(64).unwrap();
        // Energy just below the lowest expansion frequency pulls it down.
        let x = synthesize(&[SinusoidParams::new(1.0, 0.02, 0.0, 0.0)], &cfg, false);
        let r = estimate_nonlinear(&x, &[0.05], &cfg, 6, 1.0).unwrap();
        for f in r.freq_history.iter().flatten() {
            assert!(*f >= FREQ_MARGIN && *f <= PI - FREQ_MARGIN);
        }
    }

    #[test]
    fn rejects_bad_alpha_and_iterations() {
        let cfg = make_frame_config(64).unwrap();
        assert!(estimate_nonlinear(&[0.0; 64], &[0.3], &cfg, 0, 1.0).is_err());
        assert!(estimate_nonlinear(&[0.0; 64], &[0.3], &cfg, 1, 0.0).is_err());
        assert!(estimate_nonlinear(&[0.0; 64], &[0.3], &cfg, 1, 1.5).is_err());
        assert!(estimate_linear(&[0.0; 64], &[3.5], &cfg, 1).is_err());
    }
}
