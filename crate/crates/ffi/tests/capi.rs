use std::f64::consts::PI;
use std::ffi::CStr;
use std::path::Path;
use std::process::Command;
use std::ptr;

use sinefit_ffi::*;

struct Frame(*mut SinefitFrame);

impl Frame {
    fn new(len: usize) -> Self {
        let mut h = ptr::null_mut();
        assert_eq!(unsafe { sinefit_frame_new(len, &mut h) }, SinefitStatus::Ok);
        assert!(!h.is_null());
        Frame(h)
    }
}

impl Drop for Frame {
    fn drop(&mut self) {
        unsafe { sinefit_frame_free(self.0) };
    }
}

fn last_error() -> String {
    let p = sinefit_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn synth(frame: &Frame, partials: &[SinefitPartial], windowed: bool) -> Vec<f64> {
    let len = unsafe { sinefit_frame_len(frame.0) };
    let mut out = vec![0.0; len];
    let status = unsafe {
        sinefit_synthesize(
            frame.0,
            partials.as_ptr(),
            partials.len(),
            windowed,
            out.as_mut_ptr(),
            out.len(),
        )
    };
    assert_eq!(status, SinefitStatus::Ok);
    out
}

#[test]
fn peak_pick_then_estimate() {
    let frame = Frame::new(256);
    let truth = [
        SinefitPartial {
            amp: 1.0,
            freq: 0.3,
            phase: 0.4,
            amp_slope: 0.0,
        },
        SinefitPartial {
            amp: 0.5,
            freq: 1.1,
            phase: -2.0,
            amp_slope: 0.0,
        },
    ];
    let x = synth(&frame, &truth, false);

    let mut peaks = [0.0; 4];
    let mut count = 0usize;
    let status = unsafe {
        sinefit_dft_peak_pick(
            frame.0,
            x.as_ptr(),
            x.len(),
            2,
            peaks.as_mut_ptr(),
            &mut count,
        )
    };
    assert_eq!(status, SinefitStatus::Ok);
    assert_eq!(count, 2);
    assert!((peaks[0] - 0.3).abs() < 2.0 * PI / 256.0);

    let mut out = [SinefitPartial::default(); 2];
    let status = unsafe {
        sinefit_estimate_nonlinear(
            frame.0,
            x.as_ptr(),
            x.len(),
            peaks.as_ptr(),
            2,
            8,
            1.0,
            out.as_mut_ptr(),
        )
    };
    assert_eq!(status, SinefitStatus::Ok);
    for (o, t) in out.iter().zip(&truth) {
        assert!((o.freq - t.freq).abs() < 1e-8, "{o:?}");
        assert!((o.amp - t.amp).abs() < 1e-8, "{o:?}");
    }

    let mut lin = [SinefitPartial::default(); 2];
    let status = unsafe {
        sinefit_estimate_linear(
            frame.0,
            x.as_ptr(),
            x.len(),
            peaks.as_ptr(),
            2,
            2,
            lin.as_mut_ptr(),
        )
    };
    assert_eq!(status, SinefitStatus::Ok);
    assert!((lin[0].freq - 0.3).abs() < (peaks[0] - 0.3).abs());
}

#[test]
fn errors_are_reported() {
    let mut h = ptr::null_mut();
    assert_eq!(
        unsafe { sinefit_frame_new(9, &mut h) },
        SinefitStatus::InvalidFrameLength
    );
    assert!(h.is_null());
    assert_eq!(
        unsafe { sinefit_frame_new(64, ptr::null_mut()) },
        SinefitStatus::NullPointer
    );

    let frame = Frame::new(64);
    let x = vec![0.0; 63];
    let theta = [0.5];
    let mut out = [SinefitPartial::default()];
    let status = unsafe {
        sinefit_estimate_linear(
            frame.0,
            x.as_ptr(),
            x.len(),
            theta.as_ptr(),
            1,
            2,
            out.as_mut_ptr(),
        )
    };
    assert_eq!(status, SinefitStatus::LengthMismatch);
    assert!(last_error().contains("63"));

    let x = vec![0.0; 64];
    let theta = [4.0];
    let status = unsafe {
        sinefit_estimate_linear(
            frame.0,
            x.as_ptr(),
            x.len(),
            theta.as_ptr(),
            1,
            2,
            out.as_mut_ptr(),
        )
    };
    assert_eq!(status, SinefitStatus::FrequencyOutOfRange);

    let theta = [0.5];
    let status = unsafe {
        sinefit_estimate_nonlinear(
            frame.0,
            x.as_ptr(),
            x.len(),
            theta.as_ptr(),
            1,
            2,
            2.0,
            out.as_mut_ptr(),
        )
    };
    assert_eq!(status, SinefitStatus::InvalidArgument);

    let status = unsafe {
        sinefit_estimate_linear(
            ptr::null(),
            x.as_ptr(),
            x.len(),
            theta.as_ptr(),
            1,
            2,
            out.as_mut_ptr(),
        )
    };
    assert_eq!(status, SinefitStatus::NullPointer);

    let mut short = [0.0; 10];
    let p = [SinefitPartial {
        amp: 1.0,
        freq: 0.5,
        ..Default::default()
    }];
    let status = unsafe {
        sinefit_synthesize(
            frame.0,
            p.as_ptr(),
            1,
            true,
            short.as_mut_ptr(),
            short.len(),
        )
    };
    assert_eq!(status, SinefitStatus::BufferTooSmall);

    unsafe { sinefit_frame_free(ptr::null_mut()) };
    assert_eq!(unsafe { sinefit_frame_len(ptr::null()) }, 0);
}

#[test]
fn synthesis_window_applied() {
    let frame = Frame::new(64);
    let p = [SinefitPartial {
        amp: 1.0,
        freq: 0.0001,
        phase: 0.0,
        amp_slope: 0.0,
    }];
    let raw = synth(&frame, &p, false);
    let win = synth(&frame, &p, true);
    assert!((raw[32] - win[32]).abs() < 1e-3);
    assert!(win[0].abs() < 0.05 && raw[0] > 0.99);
}

#[test]
fn flop_model_typical_values() {
    assert_eq!(
        sinefit_flop_model(SinefitFlopMethod::Linear as u32, 256, 20, 2, 32),
        107_520
    );
    assert_eq!(
        sinefit_flop_model(SinefitFlopMethod::Nonlinear as u32, 256, 20, 3, 32),
        240_640
    );
    assert_eq!(
        sinefit_flop_model(SinefitFlopMethod::MpSlow as u32, 256, 20, 3, 32),
        13_107_200
    );
    assert_eq!(
        sinefit_flop_model(SinefitFlopMethod::Nonlinear as u32, 256, 20, 0, 32),
        0
    );
    assert_eq!(sinefit_flop_model(9, 256, 20, 2, 32), 0);
}

#[test]
fn header_declares_the_api() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/sinefit.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "sinefit_frame_new",
        "sinefit_frame_free",
        "sinefit_frame_len",
        "sinefit_last_error",
        "sinefit_estimate_linear",
        "sinefit_estimate_nonlinear",
        "sinefit_dft_peak_pick",
        "sinefit_synthesize",
        "sinefit_flop_model",
        "typedef struct SinefitFrame SinefitFrame;",
        "SINEFIT_STATUS_OK = 0",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }

    // Syntax-check the header with a C compiler when one is installed.
    let Ok(status) = Command::new("cc")
        .args(["-fsyntax-only", "-x", "c", "-std=c99", "-Wall", "-Werror"])
        .arg(&header)
        .status()
    else {
        return;
    };
    assert!(status.success());
}
