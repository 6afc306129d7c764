//! Axisymmetric layered half-space under a surface disk load.
//!
//! The forearm is a stack of finite viscoelastic layers over a bone
//! half-space. For each radial wavenumber the boundary-value problem (traction
//! at the surface, continuity of `σ_zz`, `σ_zr`, `u_r`, `u_z` at each
//! interface, decay in the substrate) reduces to a small dense linear system;
//! surface displacements follow from inverse Hankel quadrature, and the
//! material attenuation factor of the top layer is applied afterwards.

mod config;
mod modes;
mod profile;
mod synthesis;
mod system;

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::materials::Material;
use crate::parallel::Execution;

pub use config::{load_stack, parse_stack, stack_to_string, DEFAULT_FOREARM_TOML};
pub use modes::StateVector;
pub use profile::{normalize_profile, AmplitudeProfile, ProfileMetadata};
pub use synthesis::{surface_profile, surface_response, SurfaceResponse};
pub use system::{
    assemble_system, boundary_residual, solve_layer_coefficients, surface_transfer,
    BoundaryResidual, BoundarySystem, LayerCoefficients, SurfaceTransfer,
};

/// One finite layer and the depth of its lower face, m.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub material: Material,
    pub bottom_depth: f64,
}

/// Finite layers from the surface down, over a half-space substrate.
#[derive(Debug, Clone, PartialEq)]
pub struct SkinStack {
    layers: Vec<Layer>,
    substrate: Material,
}

impl SkinStack {
    pub fn new(layers: Vec<Layer>, substrate: Material) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::InvalidStack("at least one finite layer is required".into()));
        }
        let mut previous = 0.0;
        for (i, layer) in layers.iter().enumerate() {
            let depth = layer.bottom_depth;
            if !depth.is_finite() || depth <= previous {
                return Err(Error::InvalidStack(format!(
                    "layer {i} (`{}`): bottom depth {depth} m must be finite and exceed {previous} m",
                    layer.material.name()
                )));
            }
            previous = depth;
        }
        Ok(Self { layers, substrate })
    }

    /// Epidermis/dermis, hypodermis and muscle over bone, read from the
    /// configuration shipped with the crate.
    pub fn default_forearm() -> Self {
        parse_stack(DEFAULT_FOREARM_TOML, std::path::Path::new("forearm.toml"))
            .expect("shipped forearm stack is valid")
    }

    /// A half-space of `material` cut by artificial interfaces at `depths`.
    pub fn homogeneous(material: &Material, depths: &[f64]) -> Result<Self> {
        let layers = depths
            .iter()
            .map(|&d| Layer {
                material: material.clone(),
                bottom_depth: d,
            })
            .collect();
        Self::new(layers, material.clone())
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn substrate(&self) -> &Material {
        &self.substrate
    }

    /// Material at the loaded surface.
    pub fn top(&self) -> &Material {
        &self.layers[0].material
    }

    /// Number of modal amplitudes, `4·L + 2`.
    pub fn unknown_count(&self) -> usize {
        4 * self.layers.len() + 2
    }

    pub(crate) fn thickness(&self, i: usize) -> f64 {
        let top = if i == 0 { 0.0 } else { self.layers[i - 1].bottom_depth };
        self.layers[i].bottom_depth - top
    }

    /// SHA-256 of the canonical stack text.
    pub fn content_hash(&self) -> String {
        crate::io::sha256_hex(stack_to_string(self).as_bytes())
    }
}

/// Uniform normal and tangential traction over a surface disk, oscillating
/// at `frequency` Hz.
///
/// The normal traction is the boundary value of `σ_zz` itself, so a pressure
/// pushing into the skin is negative and drives a positive (downward) `u_z`.
/// The tangential traction is radial and grows linearly from the centre to
/// `tangential_traction` at the rim, which keeps the axisymmetric field
/// regular on the axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadSpec {
    pub normal_traction: f64,
    pub tangential_traction: f64,
    pub disk_radius: f64,
    pub frequency: f64,
}

impl LoadSpec {
    pub fn new(
        normal_traction: f64,
        tangential_traction: f64,
        disk_radius: f64,
        frequency: f64,
    ) -> Result<Self> {
        let load = Self {
            normal_traction,
            tangential_traction,
            disk_radius,
            frequency,
        };
        load.validate()?;
        Ok(load)
    }

    /// Normal traction only.
    pub fn normal(normal_traction: f64, disk_radius: f64, frequency: f64) -> Result<Self> {
        Self::new(normal_traction, 0.0, disk_radius, frequency)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.disk_radius.is_finite() && self.disk_radius > 0.0) {
            return Err(Error::InvalidLoad(format!(
                "disk radius must be positive, got {}",
                self.disk_radius
            )));
        }
        if !(self.frequency.is_finite() && self.frequency >= 0.0) {
            return Err(Error::InvalidLoad(format!(
                "frequency must be non-negative, got {}",
                self.frequency
            )));
        }
        if !self.normal_traction.is_finite() || !self.tangential_traction.is_finite() {
            return Err(Error::InvalidLoad("tractions must be finite".into()));
        }
        Ok(())
    }

    pub fn omega(&self) -> f64 {
        2.0 * PI * self.frequency
    }

    pub fn is_zero(&self) -> bool {
        self.normal_traction == 0.0 && self.tangential_traction == 0.0
    }

    /// Same load with both tractions multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            normal_traction: self.normal_traction * factor,
            tangential_traction: self.tangential_traction * factor,
            ..*self
        }
    }

    /// Order-0 Hankel transform of the normal traction, `F a J1(ka)/k`.
    pub fn normal_spectrum(&self, k: f64) -> f64 {
        let a = self.disk_radius;
        self.normal_traction * a * crate::bessel::j1(k * a) / k
    }

    /// Order-1 Hankel transform of the tangential traction, `F a J2(ka)/k`.
    pub fn tangential_spectrum(&self, k: f64) -> f64 {
        let a = self.disk_radius;
        self.tangential_traction * a * crate::bessel::j2(k * a) / k
    }
}

/// Numerical settings of the wavenumber solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Lower quadrature limit times the disk radius.
    pub k_min_factor: f64,
    /// Upper quadrature limit times the disk radius.
    pub k_max_factor: f64,
    /// Log-spaced intervals of the first quadrature pass.
    pub initial_intervals: usize,
    /// Doubling stops with an accuracy error beyond this many intervals.
    pub max_intervals: usize,
    /// Convergence threshold on the relative change between two passes.
    pub tolerance: f64,
    /// Relative imaginary part given to the frequency inside the per-wavenumber
    /// solve, `ω(1 + iδ)`. Moves surface-wave poles off the real wavenumber
    /// axis; zero at zero frequency.
    pub frequency_damping: f64,
    /// Condition-number estimate above which a solve is rejected.
    pub condition_limit: f64,
    pub execution: Execution,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            k_min_factor: 1e-2,
            k_max_factor: 40.0,
            initial_intervals: 512,
            max_intervals: 1 << 16,
            tolerance: 1e-4,
            frequency_damping: 0.05,
            condition_limit: 1e14,
            execution: Execution::Parallel,
        }
    }
}

impl SolverOptions {
    pub fn with_execution(self, execution: Execution) -> Self {
        Self { execution, ..self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::silicones;

    #[test]
    fn stack_depths_must_increase() {
        let m = silicones::dragon_skin_10();
        assert!(SkinStack::homogeneous(&m, &[0.001, 0.001]).is_err());
        assert!(SkinStack::homogeneous(&m, &[0.0]).is_err());
        assert!(SkinStack::homogeneous(&m, &[]).is_err());
        let s = SkinStack::homogeneous(&m, &[0.001, 0.003]).unwrap();
        assert_eq!(s.unknown_count(), 10);
        assert!((s.thickness(1) - 0.002).abs() < 1e-15);
    }

    #[test]
    fn default_forearm_has_three_layers_over_bone() {
        let s = SkinStack::default_forearm();
        assert_eq!(s.layers().len(), 3);
        assert_eq!(s.unknown_count(), 14);
        assert_eq!(s.substrate().name(), "bone");
        let depths: Vec<f64> = s.layers().iter().map(|l| l.bottom_depth).collect();
        assert_eq!(depths, [0.0015, 0.005, 0.02]);
    }

    #[test]
    fn load_validation() {
        assert!(LoadSpec::normal(1.0, 0.0, 100.0).is_err());
        assert!(LoadSpec::normal(1.0, 0.003, -1.0).is_err());
        assert!(LoadSpec::normal(f64::NAN, 0.003, 1.0).is_err());
        let l = LoadSpec::normal(-2.0, 0.0035, 125.0).unwrap();
        assert!((l.omega() - 2.0 * PI * 125.0).abs() < 1e-12);
    }

    #[test]
    fn disk_spectrum_small_k_limit() {
        // F a J1(ka)/k -> F a^2 / 2
        let l = LoadSpec::normal(3.0, 0.002, 0.0).unwrap();
        let v = l.normal_spectrum(1e-6);
        assert!((v - 3.0 * 0.002 * 0.002 / 2.0).abs() < 1e-15);
    }
}
