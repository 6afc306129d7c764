//! Vibrometer trace processing: band-pass and comb filtering, windowed
//! spectra, amplitude profiles across measurement distances and decay fits.

mod filter;
mod io;
mod pipeline;
mod spectrum;

pub use filter::{
    bandpass, butterworth_bandpass, cascade_gain, comb_notch, comb_sections, filtfilt, sosfilt, BiquadSection,
    DEFAULT_COMB_WIDTH, DEFAULT_ORDER,
};
pub use io::{parse_trace, read_trace, trace_to_string, write_trace};
pub use pipeline::{build_profile, fit_decay, DecayFit, PipelineConfig, ProfileReference};
pub use spectrum::{hann_window, peak_amplitude, spectrum, tone_amplitude, Peak, Spectrum};

use crate::error::{Error, Result};

/// Uniformly sampled displacement record.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementTrace {
    samples: Vec<f64>,
    sample_rate: f64,
    distance_from_edge: f64,
    label: String,
}

impl MeasurementTrace {
    /// `samples` in m, `sample_rate` in Hz, `distance_from_edge` in m.
    pub fn new(
        samples: Vec<f64>,
        sample_rate: f64,
        distance_from_edge: f64,
        label: impl Into<String>,
    ) -> Result<Self> {
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(Error::InvalidTrace(format!("sample rate {sample_rate} Hz")));
        }
        if samples.len() < 2 {
            return Err(Error::InvalidTrace(format!("{} sample(s); at least 2 needed", samples.len())));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidTrace(format!("sample {i} is not finite")));
        }
        if !(distance_from_edge.is_finite() && distance_from_edge >= 0.0) {
            return Err(Error::InvalidTrace(format!("distance {distance_from_edge} m")));
        }
        Ok(Self {
            samples,
            sample_rate,
            distance_from_edge,
            label: label.into(),
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn nyquist(&self) -> f64 {
        0.5 * self.sample_rate
    }

    pub fn distance_from_edge(&self) -> f64 {
        self.distance_from_edge
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate
    }

    /// Same metadata, new samples (e.g. after filtering).
    pub fn with_samples(&self, samples: Vec<f64>) -> Self {
        Self {
            samples,
            ..self.clone()
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        self.with_samples(self.samples.iter().map(|v| v * factor).collect())
    }
}
