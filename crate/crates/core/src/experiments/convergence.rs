use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;

use super::chirp::{gen_chirps, ChirpSpec};
use super::report::format_sig9;
use super::sweep::{snap_to_bins, Method};
use crate::error::{Error, Result};
use crate::model::{make_frame_config, synthesize, SinusoidParams};
use crate::solvers::{estimate_linear, estimate_nonlinear};

/// The single amplitude-modulated partial tracked in the step-size study.
pub const SINGLE_AM_PARTIAL: SinusoidParams = SinusoidParams {
    amp: 1.0,
    freq: 0.1 * PI,
    phase: 0.5,
    amp_slope: 1e-3,
};

/// Starting frequency of the step-size study.
pub const SINGLE_AM_INIT: f64 = 0.095 * PI;

const SINGLE_AM_FRAME_LEN: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub enum ConvergenceScenario {
    /// Frequency error of the non-linear estimator on one AM partial, one
    /// curve per step scale.
    SingleAm { alphas: Vec<f64> },
    /// Residual RMS over all frames of the clean chirp mixture, one curve
    /// per iterative method.
    Chirps {
        spec: ChirpSpec,
        methods: Vec<Method>,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub label: String,
    /// Entry `i` is the value after `i` iterations; entry 0 is the start.
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    /// Column name of the curve label: `alpha` or `method`.
    pub key: &'static str,
    /// Column name of the value: `freq_error` or `residual_rms`.
    pub metric: &'static str,
    pub curves: Vec<Curve>,
}

impl ConvergenceReport {
    /// Long-format CSV: `key,iteration,metric`.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{},iteration,{}\n", self.key, self.metric);
        for c in &self.curves {
            for (i, v) in c.values.iter().enumerate() {
                let _ = writeln!(out, "{},{i},{}", c.label, format_sig9(*v));
            }
        }
        out
    }

    pub fn curve(&self, label: &str) -> Option<&Curve> {
        self.curves.iter().find(|c| c.label == label)
    }
}

/// Runs `max_iter` iterations of each configuration in `scenario`.
pub fn run_convergence(
    scenario: &ConvergenceScenario,
    max_iter: usize,
) -> Result<ConvergenceReport> {
    if max_iter == 0 {
        return Err(Error::InvalidParameter(
            "at least one iteration is required".into(),
        ));
    }
    match scenario {
        ConvergenceScenario::SingleAm { alphas } => single_am(alphas, max_iter),
        ConvergenceScenario::Chirps {
            spec,
            methods,
            seed,
        } => chirps(spec, methods, *seed, max_iter),
    }
}

fn single_am(alphas: &[f64], max_iter: usize) -> Result<ConvergenceReport> {
    let cfg = make_frame_config(SINGLE_AM_FRAME_LEN)?;
    let x = synthesize(&[SINGLE_AM_PARTIAL], &cfg, false);
    let curves = alphas
        .iter()
        .map(|&alpha| {
            let r = estimate_nonlinear(&x, &[SINGLE_AM_INIT], &cfg, max_iter, alpha)?;
            Ok(Curve {
                label: format_sig9(alpha),
                values: r
                    .freq_history
                    .iter()
                    .map(|f| (f[0] - SINGLE_AM_PARTIAL.freq).abs())
                    .collect(),
            })
        })
        .collect::<Result<_>>()?;
    Ok(ConvergenceReport {
        key: "alpha",
        metric: "freq_error",
        curves,
    })
}

fn chirps(
    spec: &ChirpSpec,
    methods: &[Method],
    seed: u64,
    max_iter: usize,
) -> Result<ConvergenceReport> {
    let cfg = make_frame_config(spec.frame_len)?;
    let signal = gen_chirps(spec, seed)?;
    let mut curves = Vec::with_capacity(methods.len());
    for method in methods {
        let per_frame = signal
            .frames
            .par_iter()
            .map(|truth| {
                let freqs: Vec<f64> = truth.partials.iter().map(|p| p.freq).collect();
                let init = snap_to_bins(&freqs, &cfg)?;
                let frame = signal.frame(truth, spec.frame_len);
                match *method {
                    Method::Linear { .. } => Ok(estimate_linear(frame, &init, &cfg, max_iter)?
                        .trace
                        .residual_energy),
                    Method::Nonlinear { alpha, .. } => {
                        Ok(estimate_nonlinear(frame, &init, &cfg, max_iter, alpha)?
                            .trace
                            .residual_energy)
                    }
                    Method::MatchingPursuit { .. } => Err(Error::InvalidParameter(
                        "matching pursuits has no iteration curve".into(),
                    )),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let samples = (per_frame.len() * spec.frame_len) as f64;
        let values = (0..=max_iter)
            .map(|i| (per_frame.iter().map(|e| e[i]).sum::<f64>() / samples).sqrt())
            .collect();
        curves.push(Curve {
            label: method.label().to_string(),
            values,
        });
    }
    Ok(ConvergenceReport {
        key: "method",
        metric: "residual_rms",
        curves,
    })
}
