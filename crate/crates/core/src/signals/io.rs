//! Trace CSV: `# rate_hz=`, `# distance_m=` and optional `# label=` lines,
//! then the header `t_s,displacement_m`.

use std::fmt::Write as _;
use std::path::Path;

use super::MeasurementTrace;
use crate::error::{Error, Result};

/// Parses trace text. Without a `rate_hz` line the rate comes from the time
/// column, which must then be uniform to 1e-6 relative.
pub fn parse_trace(text: &str, origin: &Path) -> Result<MeasurementTrace> {
    let mut rate = None;
    let mut distance = None;
    let mut label = origin
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let number = |v: &str| {
        v.trim()
            .parse::<f64>()
            .map_err(|e| Error::parse(origin, format!("`{}`: {e}", v.trim())))
    };
    let mut body = String::new();
    for line in text.lines() {
        if let Some(meta) = line.strip_prefix('#') {
            if let Some((k, v)) = meta.split_once('=') {
                match k.trim() {
                    "rate_hz" => rate = Some(number(v)?),
                    "distance_m" => distance = Some(number(v)?),
                    "label" => label = v.trim().to_string(),
                    _ => {}
                }
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
    if headers.iter().collect::<Vec<_>>() != ["t_s", "displacement_m"] {
        return Err(Error::parse(origin, "expected header `t_s,displacement_m`"));
    }
    let (mut t, mut x) = (Vec::new(), Vec::new());
    for record in reader.records() {
        let record = record.map_err(|e| Error::parse(origin, e))?;
        t.push(number(&record[0])?);
        x.push(number(&record[1])?);
    }
    let rate = match rate {
        Some(r) => r,
        None => {
            if t.len() < 2 {
                return Err(Error::InvalidTrace("too few samples to infer the rate".into()));
            }
            let dt = (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64;
            if t.windows(2).any(|w| ((w[1] - w[0]) - dt).abs() > 1e-6 * dt.abs()) {
                return Err(Error::InvalidTrace("time column is not uniformly sampled".into()));
            }
            1.0 / dt
        }
    };
    let distance = distance
        .ok_or_else(|| Error::parse(origin, "missing `# distance_m=` line"))?;
    MeasurementTrace::new(x, rate, distance, label)
}

pub fn read_trace(path: impl AsRef<Path>) -> Result<MeasurementTrace> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_trace(&text, path)
}

pub fn trace_to_string(trace: &MeasurementTrace) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# rate_hz={}", trace.sample_rate());
    let _ = writeln!(out, "# distance_m={}", trace.distance_from_edge());
    if !trace.label().is_empty() {
        let _ = writeln!(out, "# label={}", trace.label());
    }
    out.push_str("t_s,displacement_m\n");
    for (i, v) in trace.samples().iter().enumerate() {
        let _ = writeln!(out, "{:.11e},{:.11e}", i as f64 / trace.sample_rate(), v);
    }
    out
}

pub fn write_trace(trace: &MeasurementTrace, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, trace_to_string(trace)).map_err(|e| Error::io(path, e))
}
