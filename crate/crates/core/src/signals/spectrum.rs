//! Hann-windowed amplitude spectra and single-tone peak estimation.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

use super::MeasurementTrace;
use crate::error::{Error, Result};

/// One-sided amplitude spectrum; a sine of amplitude A on a bin reads A.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub frequencies: Vec<f64>,
    pub magnitudes: Vec<f64>,
    pub resolution: f64,
}

/// Periodic Hann window.
pub fn hann_window(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 0.5 * (1.0 - (2.0 * PI * i as f64 / n as f64).cos()))
        .collect()
}

pub fn spectrum(trace: &MeasurementTrace) -> Spectrum {
    let x = trace.samples();
    let n = x.len();
    let w = hann_window(n);
    let coherent: f64 = w.iter().sum();
    let mut buf: Vec<C64> = x.iter().zip(&w).map(|(v, w)| C64::new(v * w, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let resolution = trace.sample_rate() / n as f64;
    let bins = n / 2 + 1;
    let magnitudes = (0..bins)
        .map(|k| {
            let scale = if k == 0 || (n.is_multiple_of(2) && k == n / 2) { 1.0 } else { 2.0 };
            scale * buf[k].norm() / coherent
        })
        .collect();
    Spectrum {
        frequencies: (0..bins).map(|k| k as f64 * resolution).collect(),
        magnitudes,
        resolution,
    }
}

/// Windowed amplitude of a tone at an arbitrary frequency, by direct
/// evaluation of the transform.
pub fn tone_amplitude(trace: &MeasurementTrace, frequency: f64) -> f64 {
    let x = trace.samples();
    let w = hann_window(x.len());
    let coherent: f64 = w.iter().sum();
    let step = -2.0 * PI * frequency / trace.sample_rate();
    let sum: C64 = x
        .iter()
        .zip(&w)
        .enumerate()
        .map(|(i, (v, w))| C64::from_polar(v * w, step * i as f64))
        .sum();
    2.0 * sum.norm() / coherent
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub frequency: f64,
    pub amplitude: f64,
}

/// Largest spectral line within `[low, high]` Hz, refined by a parabola
/// through the log magnitudes of the three bins around it.
pub fn peak_amplitude(trace: &MeasurementTrace, low: f64, high: f64) -> Result<Peak> {
    let nyquist = trace.nyquist();
    let band_error = |reason: &str| Error::InvalidBand {
        low,
        high,
        reason: reason.to_string(),
    };
    if !(low >= 0.0 && high <= nyquist && low <= high) {
        return Err(band_error(&format!("band must lie within [0, {nyquist}] Hz")));
    }
    let s = spectrum(trace);
    let in_band: Vec<usize> = (0..s.frequencies.len())
        .filter(|&k| s.frequencies[k] >= low && s.frequencies[k] <= high)
        .collect();
    let Some(&k) = in_band
        .iter()
        .max_by(|&&a, &&b| s.magnitudes[a].total_cmp(&s.magnitudes[b]).then(b.cmp(&a)))
    else {
        return Err(band_error("no spectral bins in band"));
    };
    let m = &s.magnitudes;
    let mut offset = 0.0;
    if k > 0 && k + 1 < m.len() && m[k - 1] > 0.0 && m[k] > 0.0 && m[k + 1] > 0.0 {
        let (a, b, c) = (m[k - 1].ln(), m[k].ln(), m[k + 1].ln());
        let denom = a - 2.0 * b + c;
        if denom < 0.0 {
            offset = (0.5 * (a - c) / denom).clamp(-0.5, 0.5);
        }
    }
    let frequency = (k as f64 + offset) * s.resolution;
    let amplitude = if offset == 0.0 { m[k] } else { tone_amplitude(trace, frequency) };
    Ok(Peak { frequency, amplitude })
}
