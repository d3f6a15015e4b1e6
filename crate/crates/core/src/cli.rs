//! Command-line front end: `synth`, `estimate`, `bench` and `convergence`.
//!
//! Signals are headerless little-endian `f64` samples. All CSV output is
//! produced in full before anything is written, so a failed run never
//! leaves a partial file behind.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::baselines::{dft_peak_pick, AtomTable, Dictionary};
use crate::error::Error;
use crate::experiments::{
    add_noise, default_snr_grid, gen_chirps, noise_seed, run_convergence, run_snr_sweep, ChirpSpec,
    ConvergenceScenario, Method, ModelColumns,
};
use crate::model::{make_frame_config, FrameConfig, SinusoidParams};
use crate::solvers::{estimate_linear, estimate_nonlinear};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: truncated input, {trailing} stray bytes at byte offset {offset}")]
    Truncated {
        path: PathBuf,
        offset: u64,
        trailing: usize,
    },
    #[error("{path}: {samples} samples is shorter than one frame of {frame_len}")]
    TooShort {
        path: PathBuf,
        samples: usize,
        frame_len: usize,
    },
    #[error(transparent)]
    Model(#[from] Error),
}

#[derive(Debug, Parser)]
#[command(
    name = "sinefit",
    version,
    about = "Sinusoidal parameter estimation with Gauss-Seidel iteration"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the five-chirp test signal and its per-frame truth.
    Synth(SynthArgs),
    /// Track partials frame by frame in a raw f64 signal.
    Estimate(EstimateArgs),
    /// Sweep SNR on the chirp mixture and report pooled RMS errors.
    Bench(BenchArgs),
    /// Per-iteration error curves.
    Convergence(ConvergenceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Linear,
    Nonlinear,
    Mp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioArg {
    /// One amplitude-modulated partial, one curve per alpha.
    SingleAm,
    /// Clean chirp mixture, one curve per method.
    Chirps,
}

#[derive(Debug, Args)]
pub struct FrameArgs {
    #[arg(long, default_value_t = 256, value_parser = parse_frame_len)]
    pub frame_len: usize,
    #[arg(long, default_value_t = 192, value_parser = clap::value_parser!(u64).range(1..))]
    pub hop: u64,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[command(flatten)]
    pub frame: FrameArgs,
    #[arg(long, default_value_t = 48_000)]
    pub duration: usize,
    /// SNR in dB, or `inf` for the clean signal.
    #[arg(long, default_value = "inf", value_parser = parse_snr)]
    pub snr: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Signal output (raw little-endian f64).
    #[arg(long)]
    pub out: PathBuf,
    /// Truth CSV output; defaults to `<out>.truth.csv`.
    #[arg(long)]
    pub truth: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub frame: FrameArgs,
    /// Input signal (raw little-endian f64).
    #[arg(long = "in")]
    pub input: PathBuf,
    /// CSV output; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Largest number of partials tracked per frame.
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub partials: u64,
    #[arg(long, value_enum, default_value_t = MethodArg::Nonlinear)]
    pub method: MethodArg,
    /// Sweeps (linear) or outer iterations (non-linear); 2 and 3 by default.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub iters: Option<u64>,
    #[arg(long, default_value_t = 1.0, value_parser = parse_alpha)]
    pub alpha: f64,
    /// Dictionary oversampling for matching pursuits.
    #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u64).range(1..))]
    pub oversample: u64,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub frame: FrameArgs,
    #[arg(long, default_value_t = 48_000)]
    pub duration: usize,
    /// Comma-separated SNRs in dB; `inf` is the clean signal.
    #[arg(long, value_parser = parse_snr_list)]
    pub snr: Option<SnrList>,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [MethodArg::Linear, MethodArg::Nonlinear, MethodArg::Mp])]
    pub method: Vec<MethodArg>,
    /// Overrides the 2 linear sweeps and 3 non-linear iterations.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub iters: Option<u64>,
    #[arg(long, default_value_t = 1.0, value_parser = parse_alpha)]
    pub alpha: f64,
    #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u64).range(1..))]
    pub oversample: u64,
    /// Partial count used by the closed-form operation columns.
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub partials: u64,
    /// Append closed-form operation counts per frame and Mflops at 250 frames/s.
    #[arg(long)]
    pub flops: bool,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    pub frame: FrameArgs,
    #[arg(long, value_enum, default_value_t = ScenarioArg::SingleAm)]
    pub scenario: ScenarioArg,
    #[arg(long, value_delimiter = ',', default_values_t = [0.25, 0.5, 0.75, 1.0], value_parser = parse_alpha)]
    pub alpha: Vec<f64>,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [MethodArg::Linear, MethodArg::Nonlinear])]
    pub method: Vec<MethodArg>,
    #[arg(long, default_value_t = 48_000)]
    pub duration: usize,
    /// Largest iteration count on each curve.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub iters: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A non-empty list of SNR values.
#[derive(Debug, Clone, PartialEq)]
pub struct SnrList(pub Vec<f64>);

fn parse_frame_len(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n < 8 || !n.is_multiple_of(2) {
        return Err("frame length must be even and at least 8".into());
    }
    Ok(n)
}

fn parse_snr(s: &str) -> Result<f64, String> {
    let s = s.trim();
    match s.to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "clean" => Ok(f64::INFINITY),
        _ => {
            let v: f64 = s
                .parse()
                .map_err(|_| format!("`{s}` is not an SNR in dB"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("`{s}` is not an SNR in dB"))
            }
        }
    }
}

fn parse_snr_list(s: &str) -> Result<SnrList, String> {
    let values = s
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(parse_snr)
        .collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err("SNR list is empty".into());
    }
    Ok(SnrList(values))
}

fn parse_alpha(s: &str) -> Result<f64, String> {
    let a: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if a > 0.0 && a <= 1.0 {
        Ok(a)
    } else {
        Err("alpha must lie in (0, 1]".into())
    }
}

fn method_for(arg: MethodArg, iters: Option<u64>, alpha: f64, oversample: u64) -> Method {
    match arg {
        MethodArg::Linear => Method::Linear {
            iters: iters.unwrap_or(2) as usize,
        },
        MethodArg::Nonlinear => Method::Nonlinear {
            iters: iters.unwrap_or(3) as usize,
            alpha,
        },
        MethodArg::Mp => Method::MatchingPursuit {
            oversample: oversample as usize,
        },
    }
}

fn chirp_spec(frame: &FrameArgs, duration: usize) -> ChirpSpec {
    ChirpSpec {
        duration,
        frame_len: frame.frame_len,
        hop: frame.hop as usize,
        ..ChirpSpec::default()
    }
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

/// Reads a headerless little-endian `f64` signal.
pub fn read_signal(path: &Path) -> Result<Vec<f64>, CliError> {
    let bytes = fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let chunks = bytes.chunks_exact(8);
    let trailing = chunks.remainder().len();
    if trailing != 0 {
        return Err(CliError::Truncated {
            path: path.to_path_buf(),
            offset: (bytes.len() - trailing) as u64,
            trailing,
        });
    }
    Ok(chunks
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect())
}

pub fn encode_signal(samples: &[f64]) -> Vec<u8> {
    samples.iter().flat_map(|v| v.to_le_bytes()).collect()
}

pub fn cmd_synth(args: &SynthArgs) -> Result<(), CliError> {
    let spec = chirp_spec(&args.frame, args.duration);
    let clean = gen_chirps(&spec, args.seed)?;
    let samples = add_noise(&clean.samples, args.snr, noise_seed(args.seed, 0))?;

    let mut truth = String::from("frame_index,partial,freq,amp\n");
    for (fi, frame) in clean.frames.iter().enumerate() {
        for (k, p) in frame.partials.iter().enumerate() {
            let _ = writeln!(truth, "{fi},{k},{},{}", p.freq, p.amp);
        }
    }
    let truth_path = args.truth.clone().unwrap_or_else(|| {
        let mut s = args.out.clone().into_os_string();
        s.push(".truth.csv");
        PathBuf::from(s)
    });
    write_output(Some(&args.out), &encode_signal(&samples))?;
    write_output(Some(&truth_path), truth.as_bytes())
}

struct FrameTrack {
    params: Vec<SinusoidParams>,
    residual_rms: f64,
    iters: usize,
}

fn track_frame(
    frame: &[f64],
    cfg: &FrameConfig,
    partials: usize,
    method: Method,
    table: Option<&AtomTable>,
) -> Result<FrameTrack, Error> {
    let samples = cfg.frame_len() as f64;
    let rms = |energy: &[f64]| (energy.last().copied().unwrap_or(0.0) / samples).sqrt();
    if let Method::MatchingPursuit { .. } = method {
        let res = table
            .expect("atom table built")
            .pursue(frame, cfg, partials)?;
        return Ok(FrameTrack {
            residual_rms: rms(&res.residual_energy),
            iters: res.atoms.len(),
            params: res.atoms,
        });
    }
    let init = dft_peak_pick(frame, cfg, partials)?;
    if init.is_empty() {
        let xh = cfg.apply_window(frame)?;
        let energy: f64 = xh.iter().map(|v| v * v).sum();
        return Ok(FrameTrack {
            params: Vec::new(),
            residual_rms: (energy / samples).sqrt(),
            iters: 0,
        });
    }
    match method {
        Method::Linear { iters } => {
            let est = estimate_linear(frame, &init, cfg, iters)?;
            Ok(FrameTrack {
                residual_rms: rms(&est.trace.residual_energy),
                iters,
                params: est.params,
            })
        }
        Method::Nonlinear { iters, alpha } => {
            let est = estimate_nonlinear(frame, &init, cfg, iters, alpha)?;
            Ok(FrameTrack {
                residual_rms: rms(&est.trace.residual_energy),
                iters,
                params: est.params,
            })
        }
        Method::MatchingPursuit { .. } => unreachable!(),
    }
}

pub fn cmd_estimate(args: &EstimateArgs) -> Result<(), CliError> {
    let cfg = make_frame_config(args.frame.frame_len)?;
    let signal = read_signal(&args.input)?;
    let frame_len = args.frame.frame_len;
    if signal.len() < frame_len {
        return Err(CliError::TooShort {
            path: args.input.clone(),
            samples: signal.len(),
            frame_len,
        });
    }
    let hop = args.frame.hop as usize;
    let starts: Vec<usize> = (0..=(signal.len() - frame_len) / hop)
        .map(|i| i * hop)
        .collect();
    let partials = (args.partials as usize).min(frame_len / 4);
    let method = method_for(args.method, args.iters, args.alpha, args.oversample);
    let table = match method {
        Method::MatchingPursuit { oversample } => Some(AtomTable::new(
            Dictionary::new(frame_len, oversample)?,
            &cfg,
        )?),
        _ => None,
    };

    let tracks = starts
        .par_iter()
        .map(|&s| {
            track_frame(
                &signal[s..s + frame_len],
                &cfg,
                partials,
                method,
                table.as_ref(),
            )
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut csv = String::from("frame_index,partial,amp,freq,phase,amp_slope,residual_rms,iters\n");
    for (fi, track) in tracks.iter().enumerate() {
        for (k, p) in track.params.iter().enumerate() {
            let _ = writeln!(
                csv,
                "{fi},{k},{},{},{},{},{},{}",
                p.amp, p.freq, p.phase, p.amp_slope, track.residual_rms, track.iters
            );
        }
    }
    write_output(args.out.as_deref(), csv.as_bytes())
}

pub fn cmd_bench(args: &BenchArgs) -> Result<(), CliError> {
    let spec = chirp_spec(&args.frame, args.duration);
    let snr = args
        .snr
        .clone()
        .map(|l| l.0)
        .unwrap_or_else(default_snr_grid);
    let methods: Vec<Method> = args
        .method
        .iter()
        .map(|&m| method_for(m, args.iters, args.alpha, args.oversample))
        .collect();
    let report = run_snr_sweep(&spec, &snr, &methods, args.seed)?;
    let model = args.flops.then_some(ModelColumns {
        frame_len: args.frame.frame_len as u64,
        partials: args.partials,
        oversample: args.oversample,
    });
    write_output(args.out.as_deref(), report.to_csv(model).as_bytes())
}

pub fn cmd_convergence(args: &ConvergenceArgs) -> Result<(), CliError> {
    let scenario = match args.scenario {
        ScenarioArg::SingleAm => ConvergenceScenario::SingleAm {
            alphas: args.alpha.clone(),
        },
        ScenarioArg::Chirps => ConvergenceScenario::Chirps {
            spec: chirp_spec(&args.frame, args.duration),
            methods: args
                .method
                .iter()
                .map(|&m| method_for(m, Some(args.iters), 1.0, 32))
                .collect(),
            seed: args.seed,
        },
    };
    let report = run_convergence(&scenario, args.iters as usize)?;
    write_output(args.out.as_deref(), report.to_csv().as_bytes())
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Synth(a) => cmd_synth(a),
        Command::Estimate(a) => cmd_estimate(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Convergence(a) => cmd_convergence(a),
    }
}

/// Parses the process arguments and runs; usage errors exit with 2, run
/// failures with 1.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
