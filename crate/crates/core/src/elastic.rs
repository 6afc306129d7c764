//! Scalar wave physics: body-wave speeds, the viscous attenuation factor
//! `exp(-ω η d / (E v))` and normal-incidence transmission/reflection at an
//! impedance step.

use crate::error::{Error, Result};
use crate::materials::Material;

/// Compressional (`Primary`) or shear (`Secondary`) body wave.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WaveKind {
    Primary,
    Secondary,
}

impl WaveKind {
    pub const ALL: [WaveKind; 2] = [WaveKind::Primary, WaveKind::Secondary];

    pub fn label(self) -> &'static str {
        match self {
            WaveKind::Primary => "p",
            WaveKind::Secondary => "s",
        }
    }
}

/// Body-wave speed in m/s: `sqrt((λ+2μ)/ρ)` or `sqrt(μ/ρ)`.
pub fn wave_speed(m: &Material, kind: WaveKind) -> f64 {
    let lame = m.lame();
    let stiffness = match kind {
        WaveKind::Primary => lame.lambda + 2.0 * lame.mu,
        WaveKind::Secondary => lame.mu,
    };
    (stiffness / m.density()).sqrt()
}

/// Characteristic impedance `ρ v`, Pa·s/m.
pub fn impedance(m: &Material, kind: WaveKind) -> f64 {
    m.density() * wave_speed(m, kind)
}

/// Exponent `ω η d / (E v)` of the attenuation factor.
pub fn attenuation_exponent(m: &Material, omega: f64, distance: f64, kind: WaveKind) -> f64 {
    omega * m.viscosity() * distance / (m.elastic_modulus() * wave_speed(m, kind))
}

/// Material attenuation over a straight path of length `distance` (m) at
/// angular frequency `omega` (rad/s). In (0, 1] for non-negative inputs.
pub fn attenuation_factor(m: &Material, omega: f64, distance: f64, kind: WaveKind) -> f64 {
    (-attenuation_exponent(m, omega, distance, kind)).exp()
}

/// Normal-incidence coefficients for a wave crossing from the incident into
/// the transmitted medium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceCoefficients {
    pub transmission: f64,
    pub reflection: f64,
    pub incident_impedance: f64,
    pub transmitted_impedance: f64,
}

/// `k_t = 2 z₁/(z₁+z₂)`, `k_r = (z₁−z₂)/(z₁+z₂)`.
///
/// `k_r` is evaluated as `k_t − 1` so that `k_t = 1 + k_r` holds to the last
/// bit; the two algebraic forms differ by at most one rounding.
pub fn impedance_coefficients(incident: f64, transmitted: f64) -> Result<InterfaceCoefficients> {
    if !(incident >= 0.0 && transmitted >= 0.0) || !incident.is_finite() || !transmitted.is_finite()
    {
        return Err(Error::Domain(format!(
            "impedances must be finite and non-negative, got {incident} and {transmitted}"
        )));
    }
    let sum = incident + transmitted;
    if sum == 0.0 {
        return Err(Error::DegenerateInterface);
    }
    let transmission = 2.0 * incident / sum;
    Ok(InterfaceCoefficients {
        transmission,
        reflection: transmission - 1.0,
        incident_impedance: incident,
        transmitted_impedance: transmitted,
    })
}

/// Coefficients between two materials, using the speed of the given wave
/// kind on both sides.
pub fn interface_coefficients(
    incident: &Material,
    transmitted: &Material,
    kind: WaveKind,
) -> Result<InterfaceCoefficients> {
    impedance_coefficients(impedance(incident, kind), impedance(transmitted, kind))
}
