//! Radial amplitude profiles, their normalization and the profile CSV file
//! shared by simulated and measured data.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Surface displacement amplitude sampled at increasing radii.
///
/// `reference_amplitude` is the factor that turns the stored values back into
/// metres: 1 for a raw profile, the pre-normalization `|u_z|` at
/// `reference_radius` once normalized. A component that was not measured is
/// stored as NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeProfile {
    pub radii: Vec<f64>,
    pub u_r: Vec<f64>,
    pub u_z: Vec<f64>,
    pub normalized: bool,
    pub reference_amplitude: f64,
    pub reference_radius: Option<f64>,
}

impl AmplitudeProfile {
    /// Raw profile in metres.
    pub fn new(radii: Vec<f64>, u_r: Vec<f64>, u_z: Vec<f64>) -> Result<Self> {
        let p = Self {
            radii,
            u_r,
            u_z,
            normalized: false,
            reference_amplitude: 1.0,
            reference_radius: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.radii.len();
        if n == 0 {
            return Err(Error::InvalidProfile("no radii".into()));
        }
        if self.u_r.len() != n || self.u_z.len() != n {
            return Err(Error::InvalidProfile(format!(
                "column lengths differ: {} radii, {} u_r, {} u_z",
                n,
                self.u_r.len(),
                self.u_z.len()
            )));
        }
        if self.radii.iter().any(|r| !r.is_finite() || *r < 0.0) {
            return Err(Error::InvalidProfile("radii must be finite and non-negative".into()));
        }
        if self.radii.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidProfile("radii must be strictly increasing".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// `u_z` at `radius`, linearly interpolated. `None` outside the sampled
    /// range.
    pub fn u_z_at(&self, radius: f64) -> Option<f64> {
        interpolate(&self.radii, &self.u_z, radius)
    }

    pub fn u_r_at(&self, radius: f64) -> Option<f64> {
        interpolate(&self.radii, &self.u_r, radius)
    }

    /// Every value multiplied by `factor`; the reference amplitude is kept.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            u_r: self.u_r.iter().map(|v| v * factor).collect(),
            u_z: self.u_z.iter().map(|v| v * factor).collect(),
            ..self.clone()
        }
    }

    /// Values back in metres.
    pub fn denormalized(&self) -> Self {
        Self {
            u_r: self.u_r.iter().map(|v| v * self.reference_amplitude).collect(),
            u_z: self.u_z.iter().map(|v| v * self.reference_amplitude).collect(),
            normalized: false,
            reference_amplitude: 1.0,
            reference_radius: None,
            radii: self.radii.clone(),
        }
    }

    /// CSV text: `#` metadata lines, the header `r_m,u_r_m,u_z_m`, then one
    /// row per radius with 12 significant digits.
    pub fn to_csv_string(&self, metadata: &ProfileMetadata) -> String {
        let mut out = String::new();
        for (k, v) in &metadata.entries {
            let _ = writeln!(out, "# {k}={v}");
        }
        let _ = writeln!(out, "# normalized={}", self.normalized);
        let _ = writeln!(out, "# reference_amplitude_m={:.11e}", self.reference_amplitude);
        if let Some(r) = self.reference_radius {
            let _ = writeln!(out, "# reference_radius_m={r:.11e}");
        }
        out.push_str("r_m,u_r_m,u_z_m\n");
        for i in 0..self.len() {
            let _ = writeln!(
                out,
                "{:.11e},{:.11e},{:.11e}",
                self.radii[i], self.u_r[i], self.u_z[i]
            );
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>, metadata: &ProfileMetadata) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_csv_string(metadata)).map_err(|e| Error::io(path, e))
    }

    /// Parses profile CSV text. Metadata lines other than the normalization
    /// keys are returned untouched.
    pub fn parse_csv(text: &str, origin: &Path) -> Result<(Self, ProfileMetadata)> {
        let mut metadata = ProfileMetadata::default();
        let mut normalized = false;
        let mut reference_amplitude = 1.0;
        let mut reference_radius = None;
        let number = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|e| Error::parse(origin, format!("`{v}`: {e}")))
        };
        let mut body = String::new();
        for line in text.lines() {
            if let Some(meta) = line.strip_prefix('#') {
                let Some((k, v)) = meta.trim().split_once('=') else {
                    continue;
                };
                match k.trim() {
                    "normalized" => normalized = v.trim() == "true",
                    "reference_amplitude_m" => reference_amplitude = number(v)?,
                    "reference_radius_m" => reference_radius = Some(number(v)?),
                    key => metadata.push(key, v.trim()),
                }
            } else if !line.trim().is_empty() {
                body.push_str(line);
                body.push('\n');
            }
        }
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(body.as_bytes());
        let headers = reader.headers().map_err(|e| Error::parse(origin, e))?.clone();
        if headers.iter().collect::<Vec<_>>() != ["r_m", "u_r_m", "u_z_m"] {
            return Err(Error::parse(origin, "expected header `r_m,u_r_m,u_z_m`"));
        }
        let (mut radii, mut u_r, mut u_z) = (Vec::new(), Vec::new(), Vec::new());
        for record in reader.records() {
            let record = record.map_err(|e| Error::parse(origin, e))?;
            radii.push(number(&record[0])?);
            u_r.push(number(&record[1])?);
            u_z.push(number(&record[2])?);
        }
        let profile = Self {
            radii,
            u_r,
            u_z,
            normalized,
            reference_amplitude,
            reference_radius,
        };
        profile.validate()?;
        Ok((profile, metadata))
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<(Self, ProfileMetadata)> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_csv(&text, path)
    }
}

/// Ordered `key=value` header lines of a profile file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProfileMetadata {
    pub entries: Vec<(String, String)>,
}

impl ProfileMetadata {
    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.entries.push((key.into(), value.to_string()));
    }

    pub fn with(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.push(key, value);
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> Option<f64> {
    if xs.is_empty() || x < xs[0] || x > xs[xs.len() - 1] {
        return None;
    }
    let i = xs.partition_point(|&v| v < x);
    if xs[i] == x {
        return Some(ys[i]);
    }
    let (x0, x1, y0, y1) = (xs[i - 1], xs[i], ys[i - 1], ys[i]);
    Some(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
}

/// Divides both components by `|u_z|` at `reference_radius`.
pub fn normalize_profile(p: &AmplitudeProfile, reference_radius: f64) -> Result<AmplitudeProfile> {
    p.validate()?;
    let reference = p.u_z_at(reference_radius).ok_or_else(|| {
        Error::InvalidProfile(format!(
            "reference radius {reference_radius} m lies outside [{}, {}] m",
            p.radii[0],
            p.radii[p.len() - 1]
        ))
    })?;
    let reference = reference.abs();
    if reference == 0.0 || !reference.is_finite() {
        return Err(Error::DegenerateNormalization {
            radius: reference_radius,
        });
    }
    Ok(AmplitudeProfile {
        radii: p.radii.clone(),
        u_r: p.u_r.iter().map(|v| v / reference).collect(),
        u_z: p.u_z.iter().map(|v| v / reference).collect(),
        normalized: true,
        reference_amplitude: p.reference_amplitude * reference,
        reference_radius: Some(reference_radius),
    })
}
