//! Per-trace amplitude extraction, distance profiles and decay fits.

use super::filter::{butterworth_bandpass, comb_sections, filtfilt, DEFAULT_COMB_WIDTH, DEFAULT_ORDER};
use super::spectrum::peak_amplitude;
use super::MeasurementTrace;
use crate::error::{Error, Result};
use crate::parallel::{map_slice, Execution};
use crate::solver::{normalize_profile, AmplitudeProfile};

/// Filter chain and peak search band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    pub bandpass: (f64, f64),
    pub order: usize,
    /// `None` skips the comb.
    pub comb_fundamental: Option<f64>,
    pub comb_width: f64,
    pub peak_band: (f64, f64),
    pub execution: Execution,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            bandpass: (40.0, 200.0),
            order: DEFAULT_ORDER,
            comb_fundamental: Some(50.0),
            comb_width: DEFAULT_COMB_WIDTH,
            peak_band: (100.0, 150.0),
            execution: Execution::Parallel,
        }
    }
}

impl PipelineConfig {
    /// Band-pass, comb, then the spectral peak in `peak_band`. Returns the
    /// filtered trace and the peak amplitude.
    pub fn process(&self, trace: &MeasurementTrace) -> Result<(MeasurementTrace, f64)> {
        let fs = trace.sample_rate();
        let mut x = filtfilt(
            &butterworth_bandpass(self.order, self.bandpass.0, self.bandpass.1, fs)?,
            trace.samples(),
        );
        if let Some(f0) = self.comb_fundamental {
            x = filtfilt(&comb_sections(f0, self.comb_width, fs)?, &x);
        }
        let filtered = trace.with_samples(x);
        let peak = peak_amplitude(&filtered, self.peak_band.0, self.peak_band.1)?;
        Ok((filtered, peak.amplitude))
    }
}

/// What the profile is divided by.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileReference {
    /// Amplitude of the trace at distance 0 (the unit edge).
    Edge,
    /// A fixed motor amplitude, m.
    Motor(f64),
}

/// Amplitude against distance, one point per trace, sorted by distance and
/// normalized by `reference`. The measured profile has no radial component;
/// `u_r` is NaN.
pub fn build_profile(
    traces: &[MeasurementTrace],
    config: &PipelineConfig,
    reference: ProfileReference,
) -> Result<AmplitudeProfile> {
    if traces.is_empty() {
        return Err(Error::InvalidTrace("no traces".into()));
    }
    let amplitudes = map_slice(traces, config.execution, |t| config.process(t).map(|(_, a)| a))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut points: Vec<(f64, f64)> = traces
        .iter()
        .map(|t| t.distance_from_edge())
        .zip(amplitudes)
        .collect();
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    if points.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::InvalidTrace("two traces share a distance".into()));
    }
    let radii: Vec<f64> = points.iter().map(|p| p.0).collect();
    let u_z: Vec<f64> = points.iter().map(|p| p.1).collect();
    let raw = AmplitudeProfile::new(radii.clone(), vec![f64::NAN; radii.len()], u_z)?;
    match reference {
        ProfileReference::Edge => {
            if radii[0] != 0.0 {
                return Err(Error::InvalidTrace("no trace at distance 0".into()));
            }
            normalize_profile(&raw, 0.0)
        }
        ProfileReference::Motor(amplitude) => {
            if !(amplitude.is_finite() && amplitude > 0.0) {
                return Err(Error::DegenerateNormalization { radius: f64::NAN });
            }
            let mut p = raw.scaled(1.0 / amplitude);
            p.normalized = true;
            p.reference_amplitude = amplitude;
            Ok(p)
        }
    }
}

/// `u_z ≈ A₀ e^{−α r}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    /// α, 1/m.
    pub rate: f64,
    pub amplitude: f64,
    pub r_squared: f64,
    pub points_used: usize,
    /// Non-positive or non-finite amplitudes left out of the fit.
    pub excluded: usize,
}

/// Least-squares line through `(r, ln u_z)` over the positive amplitudes.
pub fn fit_decay(profile: &AmplitudeProfile) -> Result<DecayFit> {
    let points: Vec<(f64, f64)> = profile
        .radii
        .iter()
        .zip(&profile.u_z)
        .filter(|(_, &v)| v > 0.0 && v.is_finite())
        .map(|(&r, &v)| (r, v.ln()))
        .collect();
    let excluded = profile.len() - points.len();
    if points.len() < 2 {
        return Err(Error::InvalidProfile(format!(
            "decay fit needs 2 positive amplitudes, found {}",
            points.len()
        )));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = points
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let r_squared = if syy > 0.0 { (1.0 - ss_res / syy).clamp(0.0, 1.0) } else { 1.0 };
    Ok(DecayFit {
        rate: -slope,
        amplitude: intercept.exp(),
        r_squared,
        points_used: points.len(),
        excluded,
    })
}
