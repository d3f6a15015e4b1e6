use std::cmp::Ordering;
use std::f64::consts::PI;

/// One partial of the amplitude-modulated sinusoidal model,
/// `(amp + amp_slope * t) * cos(freq * t + phase)` at centred time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SinusoidParams {
    /// Linear amplitude at the frame centre.
    pub amp: f64,
    /// Normalised frequency in rad/sample, inside (0, pi).
    pub freq: f64,
    /// Phase at the frame centre, in (-pi, pi].
    pub phase: f64,
    /// Amplitude derivative per sample.
    pub amp_slope: f64,
}

impl SinusoidParams {
    pub fn new(amp: f64, freq: f64, phase: f64, amp_slope: f64) -> Self {
        Self {
            amp,
            freq,
            phase: wrap_phase(phase),
            amp_slope,
        }
    }
}

/// Wraps an angle into (-pi, pi].
pub fn wrap_phase(phase: f64) -> f64 {
    let mut p = phase % (2.0 * PI);
    if p <= -PI {
        p += 2.0 * PI;
    } else if p > PI {
        p -= 2.0 * PI;
    }
    p
}

/// Linear coefficients of one partial on its cos, sin, t*cos and t*sin
/// basis columns.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PartialWeights {
    pub c: f64,
    pub s: f64,
    pub d: f64,
    pub t: f64,
}

/// Linear weights for `N` partials, stored per column type.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinWeights {
    pub c: Vec<f64>,
    pub s: Vec<f64>,
    pub d: Vec<f64>,
    pub t: Vec<f64>,
}

impl LinWeights {
    pub fn zeros(partials: usize) -> Self {
        Self {
            c: vec![0.0; partials],
            s: vec![0.0; partials],
            d: vec![0.0; partials],
            t: vec![0.0; partials],
        }
    }

    /// Splits a `4N` vector laid out as `[c.., s.., d.., t..]`.
    pub fn from_flat(flat: &[f64]) -> Self {
        assert!(
            flat.len().is_multiple_of(4),
            "flat weight vector length must be a multiple of 4"
        );
        let n = flat.len() / 4;
        Self {
            c: flat[..n].to_vec(),
            s: flat[n..2 * n].to_vec(),
            d: flat[2 * n..3 * n].to_vec(),
            t: flat[3 * n..].to_vec(),
        }
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut flat = Vec::with_capacity(4 * self.len());
        flat.extend_from_slice(&self.c);
        flat.extend_from_slice(&self.s);
        flat.extend_from_slice(&self.d);
        flat.extend_from_slice(&self.t);
        flat
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn partial(&self, k: usize) -> PartialWeights {
        PartialWeights {
            c: self.c[k],
            s: self.s[k],
            d: self.d[k],
            t: self.t[k],
        }
    }

    pub fn set_partial(&mut self, k: usize, w: PartialWeights) {
        self.c[k] = w.c;
        self.s[k] = w.s;
        self.d[k] = w.d;
        self.t[k] = w.t;
    }

    pub fn is_finite(&self) -> bool {
        self.to_flat().iter().all(|v| v.is_finite())
    }
}

/// Parameters recovered from one partial's linear weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Recovered {
    /// Amplitude, phase and slope; `freq` is the expansion frequency, the
    /// correction is in `dtheta`.
    pub params: SinusoidParams,
    pub dtheta: f64,
    /// Amplitude fell at or below the floor; everything was zeroed.
    pub vanished: bool,
}

/// Maps sinusoid parameters and a frequency offset to linear weights.
pub fn weights_from_params(params: &SinusoidParams, dtheta: f64) -> PartialWeights {
    let (sin_p, cos_p) = params.phase.sin_cos();
    let a = params.amp;
    let slope = params.amp_slope;
    PartialWeights {
        c: a * cos_p,
        s: -a * sin_p,
        d: slope * cos_p - a * dtheta * sin_p,
        t: -slope * sin_p - a * dtheta * cos_p,
    }
}

/// Inverts [`weights_from_params`]. Partials whose amplitude is at or
/// below `amp_floor` are reported as vanished with all parameters zero.
pub fn params_from_weights(w: &PartialWeights, theta0: f64, amp_floor: f64) -> Recovered {
    let energy = w.c * w.c + w.s * w.s;
    let amp = energy.sqrt();
    if amp.partial_cmp(&amp_floor) != Some(Ordering::Greater) {
        return Recovered {
            params: SinusoidParams {
                amp: 0.0,
                freq: theta0,
                phase: 0.0,
                amp_slope: 0.0,
            },
            dtheta: 0.0,
            vanished: true,
        };
    }
    let mut phase = (-w.s).atan2(w.c);
    if phase <= -PI {
        phase = PI;
    }
    Recovered {
        params: SinusoidParams {
            amp,
            freq: theta0,
            phase,
            amp_slope: (w.d * w.c + w.s * w.t) / amp,
        },
        dtheta: (w.d * w.s - w.t * w.c) / energy,
        vanished: false,
    }
}
