use std::fmt::Write as _;

use super::flop_model::{flop_model, mflops, FlopMethod, TYPICAL_FRAMES_PER_SEC};

pub const REPORT_HEADER: &str =
    "snr_db,method,freq_rms,amp_rms,recon_rms,outlier_rate,flops_per_frame";

/// Pooled errors for one (SNR, method) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    /// `f64::INFINITY` for the clean signal.
    pub snr_db: f64,
    pub method: String,
    pub iterations: usize,
    pub freq_rms: f64,
    pub amp_rms: f64,
    pub recon_rms: f64,
    /// Reconstruction RMS of the all-zero estimate.
    pub zero_rms: f64,
    pub outlier_rate: f64,
    /// Mean instrumented operation count.
    pub flops_per_frame: f64,
    pub frames: usize,
    /// Frames whose reconstruction error exceeds the zero estimate's.
    pub frames_worse_than_zero: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExperimentReport {
    /// Ordered by SNR grid position, then method position.
    pub rows: Vec<ReportRow>,
}

/// Parameters for the closed-form operation-count columns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelColumns {
    pub frame_len: u64,
    pub partials: u64,
    pub oversample: u64,
}

impl ExperimentReport {
    pub fn row(&self, snr_db: f64, method: &str) -> Option<&ReportRow> {
        self.rows
            .iter()
            .find(|r| r.snr_db == snr_db && r.method == method)
    }

    /// Renders the report as CSV. With `model`, two columns are appended:
    /// the closed-form operations per frame and the corresponding Mflops at
    /// 250 frames per second.
    pub fn to_csv(&self, model: Option<ModelColumns>) -> String {
        let mut out = String::from(REPORT_HEADER);
        if model.is_some() {
            out.push_str(",model_flops_per_frame,model_mflops");
        }
        out.push('\n');
        for r in &self.rows {
            let _ = write!(
                out,
                "{},{},{},{},{},{},{}",
                format_sig9(r.snr_db),
                r.method,
                format_sig9(r.freq_rms),
                format_sig9(r.amp_rms),
                format_sig9(r.recon_rms),
                format_sig9(r.outlier_rate),
                format_sig9(r.flops_per_frame),
            );
            if let Some(m) = model {
                let method = match r.method.as_str() {
                    "linear" => FlopMethod::Linear,
                    "nonlinear" => FlopMethod::Nonlinear,
                    _ => FlopMethod::MpSlow,
                };
                let ops = flop_model(
                    method,
                    m.frame_len,
                    m.partials,
                    r.iterations.max(1) as u64,
                    m.oversample,
                );
                let _ = write!(
                    out,
                    ",{ops},{}",
                    format_sig9(mflops(ops, TYPICAL_FRAMES_PER_SEC))
                );
            }
            out.push('\n');
        }
        out
    }
}

/// Formats like C's `%.9g`: nine significant digits, trailing zeros
/// dropped, scientific notation outside `[1e-5, 1e9)`. Infinities print as
/// `inf` / `-inf`.
pub fn format_sig9(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..9).contains(&exp) {
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (8 - exp) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(format_sig9(107520.0), "107520");
        assert_eq!(format_sig9(26.88), "26.88");
        assert_eq!(format_sig9(1.0 / 3.0), "0.333333333");
        assert_eq!(format_sig9(-2.5e-7), "-2.5e-7");
        assert_eq!(format_sig9(123456789012.0), "1.23456789e11");
        assert_eq!(format_sig9(999999999.6), "1e9");
        assert_eq!(format_sig9(f64::INFINITY), "inf");
        assert_eq!(format_sig9(0.0), "0");
        assert_eq!(format_sig9(-10.0), "-10");
    }

    #[test]
    fn round_trips_to_nine_digits() {
        for v in [std::f64::consts::PI, 1.234567891234e-3, 6.02e23, 0.1] {
            let back: f64 = format_sig9(v).parse().unwrap();
            assert!(((back - v) / v).abs() < 5e-9);
        }
    }

    fn sample() -> ExperimentReport {
        let row = |snr: f64, method: &str, iterations| ReportRow {
            snr_db: snr,
            method: method.into(),
            iterations,
            freq_rms: 0.5,
            amp_rms: 0.25,
            recon_rms: 0.125,
            zero_rms: 1.0,
            outlier_rate: 0.0,
            flops_per_frame: 1000.0,
            frames: 3,
            frames_worse_than_zero: 0,
        };
        ExperimentReport {
            rows: vec![
                row(0.0, "linear", 2),
                row(f64::INFINITY, "nonlinear", 3),
                row(0.0, "mp", 0),
            ],
        }
    }

    #[test]
    fn csv_layout() {
        let csv = sample().to_csv(None);
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], REPORT_HEADER);
        assert_eq!(lines[1], "0,linear,0.5,0.25,0.125,0,1000");
        assert!(lines[2].starts_with("inf,nonlinear,"));
        assert_eq!(lines.len(), 4);
    }

    #[test]
    fn csv_model_columns() {
        let m = ModelColumns {
            frame_len: 256,
            partials: 20,
            oversample: 32,
        };
        let csv = sample().to_csv(Some(m));
        let lines: Vec<_> = csv.lines().collect();
        assert!(lines[0].ends_with(",model_flops_per_frame,model_mflops"));
        assert!(lines[1].ends_with(",107520,26.88"));
        assert!(lines[2].ends_with(",240640,60.16"));
        assert!(lines[3].ends_with(",13107200,3276.8"));
    }

    #[test]
    fn lookup() {
        let r = sample();
        assert_eq!(r.row(f64::INFINITY, "nonlinear").unwrap().iterations, 3);
        assert!(r.row(10.0, "linear").is_none());
    }
}
