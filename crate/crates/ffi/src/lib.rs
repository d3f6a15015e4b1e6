//! C ABI for the sinefit estimators.
//!
//! Every fallible call returns a [`SinefitStatus`]. On failure a message is
//! kept per thread and can be read with [`sinefit_last_error`]. Frame
//! settings live behind an opaque [`SinefitFrame`] handle created by
//! [`sinefit_frame_new`] and released with [`sinefit_frame_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use sinefit::baselines::dft_peak_pick;
use sinefit::experiments::{flop_model, FlopMethod};
use sinefit::{
    estimate_linear, estimate_nonlinear, make_frame_config, synthesize, Error, FrameConfig,
    SinusoidParams,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SinefitStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidFrameLength = 3,
    FrequencyOutOfRange = 4,
    Underdetermined = 5,
    DuplicateFrequency = 6,
    LengthMismatch = 7,
    SingularSystem = 8,
    ZeroEnergySignal = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

/// Values accepted by [`sinefit_flop_model`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SinefitFlopMethod {
    Linear = 0,
    Nonlinear = 1,
    MpSlow = 2,
}

/// One partial: `(amp + amp_slope t) cos(freq t + phase)` on the centred
/// time axis of the frame.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SinefitPartial {
    pub amp: f64,
    pub freq: f64,
    pub phase: f64,
    pub amp_slope: f64,
}

impl From<SinusoidParams> for SinefitPartial {
    fn from(p: SinusoidParams) -> Self {
        Self {
            amp: p.amp,
            freq: p.freq,
            phase: p.phase,
            amp_slope: p.amp_slope,
        }
    }
}

impl From<SinefitPartial> for SinusoidParams {
    fn from(p: SinefitPartial) -> Self {
        SinusoidParams {
            amp: p.amp,
            freq: p.freq,
            phase: p.phase,
            amp_slope: p.amp_slope,
        }
    }
}

/// Opaque frame settings (length, window, time axis).
pub struct SinefitFrame {
    cfg: FrameConfig,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: SinefitStatus, msg: impl Into<String>) -> SinefitStatus {
    set_error(msg.into());
    status
}

fn status_of(err: &Error) -> SinefitStatus {
    match err {
        Error::InvalidFrameLength(_) => SinefitStatus::InvalidFrameLength,
        Error::FrequencyOutOfRange { .. } => SinefitStatus::FrequencyOutOfRange,
        Error::Underdetermined { .. } => SinefitStatus::Underdetermined,
        Error::DuplicateFrequency { .. } => SinefitStatus::DuplicateFrequency,
        Error::LengthMismatch { .. } => SinefitStatus::LengthMismatch,
        Error::SingularSystem => SinefitStatus::SingularSystem,
        Error::ZeroEnergySignal => SinefitStatus::ZeroEnergySignal,
        Error::NoPartials | Error::InvalidParameter(_) => SinefitStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), SinefitStatus>) -> SinefitStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SinefitStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(SinefitStatus::Panic, "internal panic"),
    }
}

fn lift<T>(r: Result<T, Error>) -> Result<T, SinefitStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

unsafe fn input<'a, T>(ptr: *const T, len: usize, name: &str) -> Result<&'a [T], SinefitStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(fail(SinefitStatus::NullPointer, format!("{name} is null")));
    }
    Ok(slice::from_raw_parts(ptr, len))
}

unsafe fn output<'a, T>(ptr: *mut T, len: usize, name: &str) -> Result<&'a mut [T], SinefitStatus> {
    if len == 0 {
        return Ok(&mut []);
    }
    if ptr.is_null() {
        return Err(fail(SinefitStatus::NullPointer, format!("{name} is null")));
    }
    Ok(slice::from_raw_parts_mut(ptr, len))
}

unsafe fn frame_ref<'a>(frame: *const SinefitFrame) -> Result<&'a FrameConfig, SinefitStatus> {
    frame
        .as_ref()
        .map(|f| &f.cfg)
        .ok_or_else(|| fail(SinefitStatus::NullPointer, "frame handle is null"))
}

/// Message describing the last failure on this thread, or NULL. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sinefit_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Creates frame settings for `frame_len` samples (even, at least 8).
///
/// # Safety
/// `out` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn sinefit_frame_new(
    frame_len: usize,
    out: *mut *mut SinefitFrame,
) -> SinefitStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail(SinefitStatus::NullPointer, "out is null"));
        }
        let cfg = lift(make_frame_config(frame_len))?;
        *out = Box::into_raw(Box::new(SinefitFrame { cfg }));
        Ok(())
    })
}

/// Releases a handle from [`sinefit_frame_new`]. NULL is ignored.
///
/// # Safety
/// `frame` must come from [`sinefit_frame_new`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn sinefit_frame_free(frame: *mut SinefitFrame) {
    if !frame.is_null() {
        drop(Box::from_raw(frame));
    }
}

/// Frame length of the handle, or 0 for NULL.
///
/// # Safety
/// `frame` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sinefit_frame_len(frame: *const SinefitFrame) -> usize {
    frame.as_ref().map_or(0, |f| f.cfg.frame_len())
}

/// Linear estimate of `n` partials starting from `theta`, with `iters`
/// Gauss-Seidel sweeps. Writes `n` partials to `out`.
///
/// # Safety
/// `x` holds `x_len` doubles, `theta` holds `n`, `out` has room for `n`.
#[no_mangle]
pub unsafe extern "C" fn sinefit_estimate_linear(
    frame: *const SinefitFrame,
    x: *const f64,
    x_len: usize,
    theta: *const f64,
    n: usize,
    iters: usize,
    out: *mut SinefitPartial,
) -> SinefitStatus {
    guard(|| {
        let cfg = frame_ref(frame)?;
        let x = input(x, x_len, "x")?;
        let theta = input(theta, n, "theta")?;
        let out = output(out, n, "out")?;
        let est = lift(estimate_linear(x, theta, cfg, iters))?;
        for (o, p) in out.iter_mut().zip(est.params) {
            *o = p.into();
        }
        Ok(())
    })
}

/// Non-linear estimate: `iters` outer iterations with step scale `alpha`
/// in (0, 1]. Writes `n` partials to `out`.
///
/// # Safety
/// As [`sinefit_estimate_linear`].
#[no_mangle]
pub unsafe extern "C" fn sinefit_estimate_nonlinear(
    frame: *const SinefitFrame,
    x: *const f64,
    x_len: usize,
    theta: *const f64,
    n: usize,
    iters: usize,
    alpha: f64,
    out: *mut SinefitPartial,
) -> SinefitStatus {
    guard(|| {
        let cfg = frame_ref(frame)?;
        let x = input(x, x_len, "x")?;
        let theta = input(theta, n, "theta")?;
        let out = output(out, n, "out")?;
        let est = lift(estimate_nonlinear(x, theta, cfg, iters, alpha))?;
        for (o, p) in out.iter_mut().zip(est.params) {
            *o = p.into();
        }
        Ok(())
    })
}

/// Up to `max_partials` peak frequencies of the windowed spectrum, loudest
/// first. `*out_count` receives how many were written.
///
/// # Safety
/// `x` holds `x_len` doubles, `out_freqs` has room for `max_partials`,
/// `out_count` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn sinefit_dft_peak_pick(
    frame: *const SinefitFrame,
    x: *const f64,
    x_len: usize,
    max_partials: usize,
    out_freqs: *mut f64,
    out_count: *mut usize,
) -> SinefitStatus {
    guard(|| {
        let cfg = frame_ref(frame)?;
        if out_count.is_null() {
            return Err(fail(SinefitStatus::NullPointer, "out_count is null"));
        }
        let x = input(x, x_len, "x")?;
        let out = output(out_freqs, max_partials, "out_freqs")?;
        let peaks = lift(dft_peak_pick(x, cfg, max_partials))?;
        out[..peaks.len()].copy_from_slice(&peaks);
        *out_count = peaks.len();
        Ok(())
    })
}

/// Evaluates `n` partials over one frame, optionally windowed. `out_len`
/// must be at least the frame length.
///
/// # Safety
/// `partials` holds `n` entries and `out` has room for `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sinefit_synthesize(
    frame: *const SinefitFrame,
    partials: *const SinefitPartial,
    n: usize,
    windowed: bool,
    out: *mut f64,
    out_len: usize,
) -> SinefitStatus {
    guard(|| {
        let cfg = frame_ref(frame)?;
        if out_len < cfg.frame_len() {
            return Err(fail(
                SinefitStatus::BufferTooSmall,
                format!(
                    "output holds {out_len} samples, frame needs {}",
                    cfg.frame_len()
                ),
            ));
        }
        let partials: Vec<SinusoidParams> = input(partials, n, "partials")?
            .iter()
            .map(|&p| p.into())
            .collect();
        let out = output(out, out_len, "out")?;
        let y = synthesize(&partials, cfg, windowed);
        out[..y.len()].copy_from_slice(&y);
        Ok(())
    })
}

/// Closed-form operations per frame for a [`SinefitFlopMethod`] value.
/// Returns 0 for an unknown method or a non-linear count with zero
/// iterations.
#[no_mangle]
pub extern "C" fn sinefit_flop_model(
    method: u32,
    frame_len: u64,
    partials: u64,
    iters: u64,
    oversample: u64,
) -> u64 {
    let method = match method {
        0 => FlopMethod::Linear,
        1 => FlopMethod::Nonlinear,
        2 => FlopMethod::MpSlow,
        _ => return 0,
    };
    if method == FlopMethod::Nonlinear && iters == 0 {
        return 0;
    }
    flop_model(method, frame_len, partials, iters, oversample)
}
