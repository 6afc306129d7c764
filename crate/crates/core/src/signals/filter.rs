//! Second-order-section IIR filters applied forward and backward.

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use super::MeasurementTrace;
use crate::error::{Error, Result};

/// Prototype order of the band-pass (the digital filter has twice as many
/// poles).
pub const DEFAULT_ORDER: usize = 4;
/// Single-pass −3 dB width of each comb notch, Hz.
pub const DEFAULT_COMB_WIDTH: f64 = 2.0;

/// `(b0 + b1 z⁻¹ + b2 z⁻²) / (1 + a1 z⁻¹ + a2 z⁻²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiquadSection {
    pub b: [f64; 3],
    pub a: [f64; 2],
}

impl BiquadSection {
    pub fn response(&self, omega: f64) -> C64 {
        let z1 = C64::from_polar(1.0, -omega);
        let z2 = z1 * z1;
        (self.b[0] + self.b[1] * z1 + self.b[2] * z2) / (1.0 + self.a[0] * z1 + self.a[1] * z2)
    }

    /// Largest pole modulus.
    fn pole_radius(&self) -> f64 {
        let (a1, a2) = (self.a[0], self.a[1]);
        let disc = C64::new(a1 * a1 - 4.0 * a2, 0.0).sqrt();
        let p1 = (-a1 + disc) * 0.5;
        let p2 = (-a1 - disc) * 0.5;
        p1.norm().max(p2.norm())
    }

    /// Transposed direct form II state for a unit step already in steady
    /// state, and the section's DC gain.
    fn step_state(&self) -> ([f64; 2], f64) {
        let g = (self.b[0] + self.b[1] + self.b[2]) / (1.0 + self.a[0] + self.a[1]);
        ([g - self.b[0], self.b[2] - self.a[1] * g], g)
    }
}

/// Magnitude response of a cascade at `f` Hz.
pub fn cascade_gain(sections: &[BiquadSection], f: f64, sample_rate: f64) -> f64 {
    let w = 2.0 * PI * f / sample_rate;
    sections.iter().map(|s| s.response(w).norm()).product()
}

fn check_band(low: f64, high: f64, sample_rate: f64) -> Result<()> {
    let nyquist = 0.5 * sample_rate;
    let fail = |reason: &str| Error::InvalidBand {
        low,
        high,
        reason: reason.to_string(),
    };
    if !(low.is_finite() && high.is_finite()) {
        return Err(fail("edges must be finite"));
    }
    if low <= 0.0 || low >= high {
        return Err(fail("need 0 < low < high"));
    }
    if high >= nyquist {
        return Err(fail(&format!("high edge must be below Nyquist ({nyquist} Hz)")));
    }
    Ok(())
}

/// Digital Butterworth band-pass from an analog prototype of `order` poles,
/// by the low-pass to band-pass mapping and the bilinear transform with
/// pre-warped edges. Gain is exactly 1 at the geometric centre.
pub fn butterworth_bandpass(order: usize, low: f64, high: f64, sample_rate: f64) -> Result<Vec<BiquadSection>> {
    check_band(low, high, sample_rate)?;
    if order == 0 || order % 2 == 1 {
        return Err(Error::InvalidBand {
            low,
            high,
            reason: format!("prototype order must be even and positive, got {order}"),
        });
    }
    let fs2 = 2.0 * sample_rate;
    let wl = fs2 * (PI * low / sample_rate).tan();
    let wh = fs2 * (PI * high / sample_rate).tan();
    let bw = wh - wl;
    let w0sq = wl * wh;

    let mut sections = Vec::with_capacity(order);
    for k in 0..order / 2 {
        // upper-half-plane prototype pole
        let theta = PI * (2 * k + order + 1) as f64 / (2 * order) as f64;
        let p = C64::from_polar(1.0, theta);
        let half = p * (bw / 2.0);
        let root = (half * half - w0sq).sqrt();
        for s in [half + root, half - root] {
            let s = if s.im < 0.0 { s.conj() } else { s };
            let z = (1.0 + s / fs2) / (1.0 - s / fs2);
            sections.push(BiquadSection {
                b: [1.0, 0.0, -1.0],
                a: [-2.0 * z.re, z.norm_sqr()],
            });
        }
    }
    let centre = sample_rate / PI * ((w0sq.sqrt() / fs2).atan());
    let gain = cascade_gain(&sections, centre, sample_rate);
    let scale = gain.powf(-1.0 / sections.len() as f64);
    for s in &mut sections {
        for b in &mut s.b {
            *b *= scale;
        }
    }
    Ok(sections)
}

/// Notches at `fundamental` and every harmonic below Nyquist, each with a
/// single-pass −3 dB width of `width` Hz and unit gain at DC and Nyquist.
pub fn comb_sections(fundamental: f64, width: f64, sample_rate: f64) -> Result<Vec<BiquadSection>> {
    let nyquist = 0.5 * sample_rate;
    if !(fundamental > 0.0 && fundamental < nyquist) || !(width > 0.0 && width < fundamental) {
        return Err(Error::InvalidBand {
            low: fundamental,
            high: fundamental,
            reason: format!("comb fundamental must lie in (0, {nyquist}) Hz with width below it"),
        });
    }
    let beta = (PI * width / sample_rate).tan();
    let gain = 1.0 / (1.0 + beta);
    let mut sections = Vec::new();
    let mut k = 1;
    while (k as f64) * fundamental < nyquist {
        let c = (2.0 * PI * k as f64 * fundamental / sample_rate).cos();
        sections.push(BiquadSection {
            b: [gain, -2.0 * gain * c, gain],
            a: [-2.0 * gain * c, 2.0 * gain - 1.0],
        });
        k += 1;
    }
    Ok(sections)
}

/// Causal cascade, transposed direct form II. `initial` scales each
/// section's steady-state step response.
pub fn sosfilt(sections: &[BiquadSection], x: &[f64], initial: Option<f64>) -> Vec<f64> {
    let mut y = x.to_vec();
    let mut level = initial.unwrap_or(0.0);
    for s in sections {
        let (zi, g) = s.step_state();
        let (mut z1, mut z2) = (zi[0] * level, zi[1] * level);
        level *= g;
        let [b0, b1, b2] = s.b;
        let [a1, a2] = s.a;
        for v in y.iter_mut() {
            let input = *v;
            let out = b0 * input + z1;
            z1 = b1 * input - a1 * out + z2;
            z2 = b2 * input - a2 * out;
            *v = out;
        }
    }
    y
}

/// Samples for the slowest pole to decay by 10⁻³.
fn impulse_length(sections: &[BiquadSection]) -> usize {
    let r = sections.iter().map(|s| s.pole_radius()).fold(0.0, f64::max);
    if r <= 0.0 {
        return 1;
    }
    if r >= 1.0 {
        return usize::MAX / 4;
    }
    ((1e-3f64).ln() / r.ln()).ceil() as usize
}

/// Zero-phase application: odd reflection padding of three impulse lengths
/// (capped at the record length), steady-state initial conditions, then a
/// forward and a backward pass.
pub fn filtfilt(sections: &[BiquadSection], x: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n < 2 || sections.is_empty() {
        return x.to_vec();
    }
    let pad = impulse_length(sections).saturating_mul(3).min(n - 1);
    let (first, last) = (x[0], x[n - 1]);
    let mut ext = Vec::with_capacity(n + 2 * pad);
    ext.extend((1..=pad).rev().map(|i| 2.0 * first - x[i]));
    ext.extend_from_slice(x);
    ext.extend((1..=pad).map(|i| 2.0 * last - x[n - 1 - i]));

    let forward = sosfilt(sections, &ext, Some(ext[0]));
    let mut reversed: Vec<f64> = forward.into_iter().rev().collect();
    let start = reversed[0];
    reversed = sosfilt(sections, &reversed, Some(start));
    reversed.reverse();
    reversed[pad..pad + n].to_vec()
}

/// Zero-phase Butterworth band-pass of the default order.
pub fn bandpass(trace: &MeasurementTrace, low: f64, high: f64) -> Result<MeasurementTrace> {
    let sections = butterworth_bandpass(DEFAULT_ORDER, low, high, trace.sample_rate())?;
    Ok(trace.with_samples(filtfilt(&sections, trace.samples())))
}

/// Zero-phase comb of notches at `fundamental` and its harmonics, default
/// width.
pub fn comb_notch(trace: &MeasurementTrace, fundamental: f64) -> Result<MeasurementTrace> {
    let sections = comb_sections(fundamental, DEFAULT_COMB_WIDTH, trace.sample_rate())?;
    Ok(trace.with_samples(filtfilt(&sections, trace.samples())))
}
