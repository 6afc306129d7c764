//! Hierarchical encapsulations of a haptic unit and the material
//! inequalities that decide whether they attenuate or amplify.
//!
//! A wave leaving the motor crosses skin out to the inner radius `d`, then
//! the encapsulation layers, then skin again. Each medium contributes its
//! attenuation factor over the length travelled in it and each change of
//! medium its normal-incidence transmission coefficient. The product is the
//! transmitted amplitude factor; the common elastic prefactor is left out.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::elastic::{
    attenuation_factor, impedance, impedance_coefficients, interface_coefficients,
    InterfaceCoefficients, WaveKind,
};
use crate::error::{Error, Result};
use crate::materials::{self, Material};
use crate::solver::{normalize_profile, surface_profile, AmplitudeProfile, LoadSpec, SkinStack, SolverOptions};

/// Inner radius of Layer 1, m.
pub const DEFAULT_INNER_RADIUS: f64 = 4.5e-3;
/// Thickness of each encapsulation layer, m.
pub const DEFAULT_LAYER_THICKNESS: f64 = 1.25e-3;
/// Radius of the ERM motor, m.
pub const MOTOR_RADIUS: f64 = 3.5e-3;
/// Air at 20 °C.
pub const AIR_DENSITY: f64 = 1.204;
pub const AIR_SOUND_SPEED: f64 = 343.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Embedded,
    Encapsulating,
    SingleLayer,
}

impl Family {
    pub fn label(self) -> &'static str {
        match self {
            Family::Embedded => "embedded",
            Family::Encapsulating => "encapsulating",
            Family::SingleLayer => "single-layer",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "embedded" => Ok(Family::Embedded),
            "encapsulating" => Ok(Family::Encapsulating),
            "single-layer" | "single" => Ok(Family::SingleLayer),
            other => Err(Error::InvalidDesign(format!("unknown family `{other}`"))),
        }
    }
}

/// Medium on the far side of Layer 2.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OuterMedium {
    #[default]
    Skin,
    Air,
}

/// Whether the skin-to-first-layer coefficient enters the path.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coupling {
    #[default]
    Complete,
    /// Drops the skin-to-first-layer coefficient, as in the two-sided
    /// inequality the constraints are derived from.
    PaperFaithful,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ModelOptions {
    pub outer_medium: OuterMedium,
    pub coupling: Coupling,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerSpec {
    pub material: Material,
    /// m.
    pub thickness: f64,
}

/// One encapsulation geometry. A single-layer design keeps its material and
/// total thickness in `layer1`.
#[derive(Debug, Clone, PartialEq)]
pub struct HapticUnitDesign {
    family: Family,
    layer1: LayerSpec,
    layer2: Option<LayerSpec>,
    inner_radius: f64,
}

fn check_length(label: &str, v: f64, allow_zero: bool) -> Result<()> {
    let ok = v.is_finite() && if allow_zero { v >= 0.0 } else { v > 0.0 };
    if !ok {
        return Err(Error::InvalidDesign(format!("{label} = {v} m is not allowed")));
    }
    Ok(())
}

impl HapticUnitDesign {
    /// Embedded or encapsulating design. Zero thicknesses are accepted and
    /// remove the layer from every path.
    pub fn two_layer(family: Family, layer1: LayerSpec, layer2: LayerSpec, inner_radius: f64) -> Result<Self> {
        if family == Family::SingleLayer {
            return Err(Error::InvalidDesign("single-layer designs take one layer".into()));
        }
        check_length("inner radius", inner_radius, false)?;
        check_length("d1", layer1.thickness, true)?;
        check_length("d2", layer2.thickness, true)?;
        Ok(Self {
            family,
            layer1,
            layer2: Some(layer2),
            inner_radius,
        })
    }

    pub fn single_layer(material: Material, thickness: f64, inner_radius: f64) -> Result<Self> {
        check_length("inner radius", inner_radius, false)?;
        check_length("thickness", thickness, true)?;
        Ok(Self {
            family: Family::SingleLayer,
            layer1: LayerSpec { material, thickness },
            layer2: None,
            inner_radius,
        })
    }

    /// Default geometry: 1.25 mm layers around a 4.5 mm inner radius.
    pub fn paper_geometry(family: Family, layer1: Material, layer2: Material) -> Result<Self> {
        if family == Family::SingleLayer {
            return Self::single_layer(layer2, 2.0 * DEFAULT_LAYER_THICKNESS, DEFAULT_INNER_RADIUS);
        }
        Self::two_layer(
            family,
            LayerSpec {
                material: layer1,
                thickness: DEFAULT_LAYER_THICKNESS,
            },
            LayerSpec {
                material: layer2,
                thickness: DEFAULT_LAYER_THICKNESS,
            },
            DEFAULT_INNER_RADIUS,
        )
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn layer1(&self) -> &LayerSpec {
        &self.layer1
    }

    pub fn layer2(&self) -> Option<&LayerSpec> {
        self.layer2.as_ref()
    }

    pub fn inner_radius(&self) -> f64 {
        self.inner_radius
    }

    pub fn total_thickness(&self) -> f64 {
        self.layer1.thickness + self.layer2.as_ref().map_or(0.0, |l| l.thickness)
    }

    pub fn outer_radius(&self) -> f64 {
        self.inner_radius + self.total_thickness()
    }

    /// Single-layer control in Layer 2's material (Layer 1's for a
    /// single-layer design) with the same geometry.
    pub fn matched_control(&self) -> Self {
        let material = self.layer2.as_ref().unwrap_or(&self.layer1).material.clone();
        Self {
            family: Family::SingleLayer,
            layer1: LayerSpec {
                material,
                thickness: self.total_thickness(),
            },
            layer2: None,
            inner_radius: self.inner_radius,
        }
    }

    /// Same materials with new thicknesses.
    pub fn with_thicknesses(&self, d1: f64, d2: f64) -> Result<Self> {
        match &self.layer2 {
            Some(l2) => Self::two_layer(
                self.family,
                LayerSpec {
                    material: self.layer1.material.clone(),
                    thickness: d1,
                },
                LayerSpec {
                    material: l2.material.clone(),
                    thickness: d2,
                },
                self.inner_radius,
            ),
            None => Self::single_layer(self.layer1.material.clone(), d1 + d2, self.inner_radius),
        }
    }

    /// Stable identifier used in reports.
    pub fn id(&self) -> String {
        match &self.layer2 {
            Some(l2) => format!(
                "{}:{}/{}:{:.4}mm/{:.4}mm",
                self.family.label(),
                self.layer1.material.name(),
                l2.material.name(),
                self.layer1.thickness * 1e3,
                l2.thickness * 1e3
            ),
            None => format!(
                "single-layer:{}:{:.4}mm",
                self.layer1.material.name(),
                self.layer1.thickness * 1e3
            ),
        }
    }
}

/// One step of a transmission path.
#[derive(Debug, Clone, PartialEq)]
pub enum PathStep {
    Propagate { material: Material, length: f64 },
    Cross {
        from: String,
        to: String,
        coefficients: InterfaceCoefficients,
    },
}

/// Ordered media and interfaces from the motor rim to the evaluation radius.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmissionPath {
    pub kind: WaveKind,
    pub steps: Vec<PathStep>,
}

impl TransmissionPath {
    /// Natural log of each step's factor, in path order.
    pub fn log_terms(&self, omega: f64) -> Vec<f64> {
        self.steps
            .iter()
            .map(|s| match s {
                PathStep::Propagate { material, length } => {
                    attenuation_factor(material, omega, *length, self.kind).ln()
                }
                PathStep::Cross { coefficients, .. } => coefficients.transmission.ln(),
            })
            .collect()
    }

    pub fn factor(&self, omega: f64) -> f64 {
        self.steps
            .iter()
            .map(|s| match s {
                PathStep::Propagate { material, length } => {
                    attenuation_factor(material, omega, *length, self.kind)
                }
                PathStep::Cross { coefficients, .. } => coefficients.transmission,
            })
            .product()
    }

    /// Sum of propagation lengths, m.
    pub fn length(&self) -> f64 {
        self.steps
            .iter()
            .map(|s| match s {
                PathStep::Propagate { length, .. } => *length,
                PathStep::Cross { .. } => 0.0,
            })
            .sum()
    }

    /// Product of the interface transmission coefficients.
    pub fn transmission_product(&self) -> f64 {
        self.steps
            .iter()
            .filter_map(|s| match s {
                PathStep::Cross { coefficients, .. } => Some(coefficients.transmission),
                _ => None,
            })
            .product()
    }
}

fn air_impedance(kind: WaveKind) -> f64 {
    match kind {
        WaveKind::Primary => AIR_DENSITY * AIR_SOUND_SPEED,
        WaveKind::Secondary => 0.0,
    }
}

/// Builds the path for `kind` out to radius `r`.
///
/// Two-layer designs run skin, Layer 1, Layer 2, skin. The shear path of an
/// embedded design crosses into Layer 2 at once and stays there for the
/// whole encapsulation width, since the board sits on top of Layer 2.
/// Layers of zero thickness are dropped together with their interfaces.
pub fn transmission_path(
    design: &HapticUnitDesign,
    skin_top: &Material,
    r: f64,
    kind: WaveKind,
    options: ModelOptions,
) -> Result<TransmissionPath> {
    let outer = design.outer_radius();
    if !(r.is_finite() && r >= outer) {
        return Err(Error::Domain(format!(
            "evaluation radius {r} m lies inside the unit (outer radius {outer} m)"
        )));
    }
    // (material, path length); layers with zero design thickness are skipped.
    let mut media: Vec<(&Material, f64)> = vec![(skin_top, design.inner_radius)];
    match (&design.layer2, design.family, kind) {
        (None, _, _) => {
            if design.layer1.thickness > 0.0 {
                media.push((&design.layer1.material, design.layer1.thickness));
            }
        }
        (Some(l2), Family::Embedded, WaveKind::Secondary) => {
            if l2.thickness > 0.0 {
                if design.layer1.thickness > 0.0 {
                    media.push((&design.layer1.material, 0.0));
                }
                media.push((&l2.material, design.total_thickness()));
            } else if design.layer1.thickness > 0.0 {
                media.push((&design.layer1.material, design.layer1.thickness));
            }
        }
        (Some(l2), _, _) => {
            if design.layer1.thickness > 0.0 {
                media.push((&design.layer1.material, design.layer1.thickness));
            }
            if l2.thickness > 0.0 {
                media.push((&l2.material, l2.thickness));
            }
        }
    }
    let encapsulated = media.len() > 1;
    media.push((skin_top, r - outer));

    let mut steps = Vec::with_capacity(2 * media.len());
    for (i, (material, length)) in media.iter().enumerate() {
        if i > 0 {
            let from = media[i - 1].0;
            let entering = i == 1 && encapsulated;
            let exiting = i == media.len() - 1 && encapsulated;
            let coefficients = if entering && options.coupling == Coupling::PaperFaithful {
                None
            } else if exiting && options.outer_medium == OuterMedium::Air {
                Some(impedance_coefficients(impedance(from, kind), air_impedance(kind))?)
            } else {
                Some(interface_coefficients(from, material, kind)?)
            };
            if let Some(coefficients) = coefficients {
                let to = if exiting && options.outer_medium == OuterMedium::Air {
                    "air".to_string()
                } else {
                    material.name().to_string()
                };
                steps.push(PathStep::Cross {
                    from: from.name().to_string(),
                    to,
                    coefficients,
                });
            }
        }
        steps.push(PathStep::Propagate {
            material: (*material).clone(),
            length: *length,
        });
    }
    Ok(TransmissionPath { kind, steps })
}

/// Product of interface transmission coefficients and attenuation factors
/// along the path to radius `r` (m), at angular frequency `omega`.
pub fn transmitted_amplitude_factor(
    design: &HapticUnitDesign,
    skin_top: &Material,
    omega: f64,
    r: f64,
    kind: WaveKind,
    options: ModelOptions,
) -> Result<f64> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::Domain(format!("angular frequency must be positive, got {omega}")));
    }
    Ok(transmission_path(design, skin_top, r, kind, options)?.factor(omega))
}

/// Candidate-to-control amplitude ratios at the evaluation radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DesignComparison {
    pub primary: f64,
    pub secondary: f64,
}

impl DesignComparison {
    pub fn get(&self, kind: WaveKind) -> f64 {
        match kind {
            WaveKind::Primary => self.primary,
            WaveKind::Secondary => self.secondary,
        }
    }
}

fn same_length(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

/// Ratio of transmitted amplitude factors, candidate over control, for both
/// wave kinds. Below one the candidate attenuates relative to the control.
pub fn compare_designs(
    candidate: &HapticUnitDesign,
    control: &HapticUnitDesign,
    skin_top: &Material,
    omega: f64,
    r_edge: f64,
    options: ModelOptions,
) -> Result<DesignComparison> {
    if !same_length(candidate.inner_radius, control.inner_radius)
        || !same_length(candidate.outer_radius(), control.outer_radius())
    {
        return Err(Error::IncomparableDesigns(format!(
            "`{}` spans [{}, {}] m but `{}` spans [{}, {}] m",
            candidate.id(),
            candidate.inner_radius,
            candidate.outer_radius(),
            control.id(),
            control.inner_radius,
            control.outer_radius()
        )));
    }
    let r = r_edge.max(candidate.outer_radius()).max(control.outer_radius());
    let ratio = |kind| -> Result<f64> {
        Ok(transmitted_amplitude_factor(candidate, skin_top, omega, r, kind, options)?
            / transmitted_amplitude_factor(control, skin_top, omega, r, kind, options)?)
    };
    Ok(DesignComparison {
        primary: ratio(WaveKind::Primary)?,
        secondary: ratio(WaveKind::Secondary)?,
    })
}

/// One material inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstraintEntry {
    pub label: char,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs − rhs` for (a) and (b), `rhs − lhs` for (c) and (d).
    pub margin: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Attenuating,
    Amplifying,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstraintReport {
    pub entries: [ConstraintEntry; 4],
    pub verdict: Verdict,
}

/// `η √((1+ν)(1−2ν)ρ) / (E √(E(1−ν)))`, the compressional exponent per
/// metre divided by ω.
fn primary_slowness_term(m: &Material) -> f64 {
    let (e, nu, rho) = (m.elastic_modulus(), m.poisson_ratio(), m.density());
    m.viscosity() * ((1.0 + nu) * (1.0 - 2.0 * nu) * rho).sqrt() / (e * (e * (1.0 - nu)).sqrt())
}

/// `η √(2(1+ν)ρ) / (E √E)`.
fn secondary_slowness_term(m: &Material) -> f64 {
    let (e, nu, rho) = (m.elastic_modulus(), m.poisson_ratio(), m.density());
    m.viscosity() * (2.0 * (1.0 + nu) * rho).sqrt() / (e * e.sqrt())
}

fn primary_impedance_term(m: &Material) -> f64 {
    let (e, nu, rho) = (m.elastic_modulus(), m.poisson_ratio(), m.density());
    e * rho * (1.0 - nu) / ((1.0 + nu) * (1.0 - 2.0 * nu))
}

fn secondary_impedance_term(m: &Material) -> f64 {
    m.elastic_modulus() * m.density() / (1.0 + m.poisson_ratio())
}

/// Evaluates the four material inequalities for Layer 1 and Layer 2 against
/// the single-layer control material.
///
/// (a) and (b) compare the viscous exponents through the layers with the
/// control's; (c) and (d) require Layer 1 to have the lower compressional
/// and shear impedance. The first two margins are evaluated as
/// `d1 (X1 − Xc) + d2 (X2 − Xc)` so that coinciding materials give exactly
/// zero.
pub fn check_constraints(
    layer1: &Material,
    layer2: &Material,
    control: &Material,
    d1: f64,
    d2: f64,
) -> ConstraintReport {
    let viscous = |label, f: fn(&Material) -> f64| {
        let (x1, x2, xc) = (f(layer1), f(layer2), f(control));
        let lhs = x1 * d1 + x2 * d2;
        let rhs = xc * (d1 + d2);
        let margin = d1 * (x1 - xc) + d2 * (x2 - xc);
        ConstraintEntry {
            label,
            lhs,
            rhs,
            margin,
            satisfied: margin > 0.0,
        }
    };
    let impedance = |label, f: fn(&Material) -> f64| {
        let (lhs, rhs) = (f(layer1), f(layer2));
        let margin = rhs - lhs;
        ConstraintEntry {
            label,
            lhs,
            rhs,
            margin,
            satisfied: margin > 0.0,
        }
    };
    let entries = [
        viscous('a', primary_slowness_term),
        viscous('b', secondary_slowness_term),
        impedance('c', primary_impedance_term),
        impedance('d', secondary_impedance_term),
    ];
    let verdict = if entries.iter().all(|e| e.margin > 0.0) {
        Verdict::Attenuating
    } else if entries.iter().all(|e| e.margin < 0.0) {
        Verdict::Amplifying
    } else {
        Verdict::Indeterminate
    };
    ConstraintReport { entries, verdict }
}

/// Surface profile of the bare stack outside the unit, scaled by the
/// design's insertion factor and normalized at the unit edge.
///
/// The insertion factor is the transmitted amplitude factor divided by that
/// of an all-skin path of the same length; it does not depend on `r`, so the
/// normalized shape is the bare one and the design shows up in
/// `reference_amplitude`. `u_r` takes the compressional factor and `u_z` the
/// shear factor.
pub fn edge_amplitude_profile(
    design: &HapticUnitDesign,
    stack: &SkinStack,
    load: &LoadSpec,
    radii: &[f64],
    options: ModelOptions,
    solver: &SolverOptions,
) -> Result<AmplitudeProfile> {
    let edge = design.outer_radius();
    match radii.first() {
        Some(&r0) if same_length(r0, edge) || (edge == 0.0 && r0 == 0.0) => {}
        _ => {
            return Err(Error::Domain(format!(
                "profile radii must start at the unit edge {edge} m"
            )))
        }
    }
    let skin = stack.top();
    let omega = load.omega();
    let insertion = |kind| -> Result<f64> {
        let path = transmission_path(design, skin, edge, kind, options)?;
        Ok(path.factor(omega) / attenuation_factor(skin, omega, edge, kind))
    };
    let (fp, fs) = (insertion(WaveKind::Primary)?, insertion(WaveKind::Secondary)?);
    let radii: Vec<f64> = std::iter::once(edge).chain(radii[1..].iter().copied()).collect();
    let bare = surface_profile(stack, load, &radii, solver)?;
    let scaled = AmplitudeProfile::new(
        bare.radii.clone(),
        bare.u_r.iter().map(|v| v * fp).collect(),
        bare.u_z.iter().map(|v| v * fs).collect(),
    )?;
    normalize_profile(&scaled, edge)
}

// ---------------------------------------------------------------------------
// Design file

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Layer1Record {
    material: String,
    d1_m: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Layer2Record {
    material: String,
    d2_m: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DesignRecord {
    family: Family,
    inner_radius_m: Option<f64>,
    layer1: Layer1Record,
    layer2: Option<Layer2Record>,
}

/// Parses a design file, resolving material names against `catalog`.
///
/// A single-layer design may list `layer2` only with the same material, in
/// which case the two thicknesses add up.
pub fn parse_design(text: &str, origin: &Path, catalog: &[Material]) -> Result<HapticUnitDesign> {
    let rec: DesignRecord = toml::from_str(text).map_err(|e| Error::parse(origin, e))?;
    let inner = rec.inner_radius_m.unwrap_or(DEFAULT_INNER_RADIUS);
    let m1 = materials::find(catalog, &rec.layer1.material)?.clone();
    match (rec.family, rec.layer2) {
        (Family::SingleLayer, None) => HapticUnitDesign::single_layer(m1, rec.layer1.d1_m, inner),
        (Family::SingleLayer, Some(l2)) => {
            if l2.material != rec.layer1.material {
                return Err(Error::InvalidDesign(
                    "a single-layer design cannot have two materials".into(),
                ));
            }
            HapticUnitDesign::single_layer(m1, rec.layer1.d1_m + l2.d2_m, inner)
        }
        (family, Some(l2)) => {
            let m2 = materials::find(catalog, &l2.material)?.clone();
            HapticUnitDesign::two_layer(
                family,
                LayerSpec {
                    material: m1,
                    thickness: rec.layer1.d1_m,
                },
                LayerSpec {
                    material: m2,
                    thickness: l2.d2_m,
                },
                inner,
            )
        }
        (family, None) => Err(Error::InvalidDesign(format!(
            "{} design needs a `layer2` table",
            family.label()
        ))),
    }
}

pub fn load_design(path: impl AsRef<Path>, catalog: &[Material]) -> Result<HapticUnitDesign> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_design(&text, path, catalog)
}

pub fn design_to_string(design: &HapticUnitDesign) -> String {
    let rec = DesignRecord {
        family: design.family,
        inner_radius_m: Some(design.inner_radius),
        layer1: Layer1Record {
            material: design.layer1.material.name().to_string(),
            d1_m: design.layer1.thickness,
        },
        layer2: design.layer2.as_ref().map(|l| Layer2Record {
            material: l.material.name().to_string(),
            d2_m: l.thickness,
        }),
    };
    toml::to_string(&rec).expect("design records always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::silicones::{dragon_skin_10, dragon_skin_30, ecoflex_00_10};

    const OMEGA: f64 = 2.0 * std::f64::consts::PI * 125.0;

    fn skin() -> Material {
        SkinStack::default_forearm().top().clone()
    }

    fn design(family: Family, l1: Material, l2: Material) -> HapticUnitDesign {
        HapticUnitDesign::paper_geometry(family, l1, l2).unwrap()
    }

    #[test]
    fn default_geometry_spans_seven_millimetres() {
        let d = design(Family::Encapsulating, ecoflex_00_10(), dragon_skin_30());
        assert!((d.outer_radius() - 7e-3).abs() < 1e-15);
        assert!((d.matched_control().outer_radius() - 7e-3).abs() < 1e-15);
    }

    #[test]
    fn inside_unit_is_domain_error() {
        let d = design(Family::Embedded, ecoflex_00_10(), dragon_skin_30());
        let e = transmitted_amplitude_factor(&d, &skin(), OMEGA, 5e-3, WaveKind::Primary, ModelOptions::default());
        assert!(matches!(e, Err(Error::Domain(_))));
    }

    #[test]
    fn coinciding_layers_match_single_layer() {
        let c = dragon_skin_10();
        let two = design(Family::Encapsulating, c.clone(), c.clone());
        let one = two.matched_control();
        for kind in WaveKind::ALL {
            for options in [
                ModelOptions::default(),
                ModelOptions {
                    outer_medium: OuterMedium::Air,
                    coupling: Coupling::PaperFaithful,
                },
            ] {
                let a = transmitted_amplitude_factor(&two, &skin(), OMEGA, 0.01, kind, options).unwrap();
                let b = transmitted_amplitude_factor(&one, &skin(), OMEGA, 0.01, kind, options).unwrap();
                assert!((a / b - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn paper_orderings() {
        let s = skin();
        let o = ModelOptions::default();
        let att = design(Family::Encapsulating, ecoflex_00_10(), dragon_skin_30());
        let r = compare_designs(&att, &att.matched_control(), &s, OMEGA, 7e-3, o).unwrap();
        assert!(r.primary < 1.0 && r.secondary < 1.0);
        let amp = design(Family::Encapsulating, dragon_skin_30(), ecoflex_00_10());
        let r = compare_designs(&amp, &amp.matched_control(), &s, OMEGA, 7e-3, o).unwrap();
        assert!(r.primary > 1.0 && r.secondary > 1.0);
    }

    #[test]
    fn reflexive_and_incomparable() {
        let s = skin();
        let d = design(Family::Embedded, ecoflex_00_10(), dragon_skin_10());
        let r = compare_designs(&d, &d, &s, OMEGA, 0.008, ModelOptions::default()).unwrap();
        assert_eq!((r.primary, r.secondary), (1.0, 1.0));
        let wide = d.with_thicknesses(2e-3, 1.25e-3).unwrap();
        assert!(matches!(
            compare_designs(&wide, &d, &s, OMEGA, 0.01, ModelOptions::default()),
            Err(Error::IncomparableDesigns(_))
        ));
    }

    #[test]
    fn constraints_boundary_case() {
        let m = dragon_skin_10();
        let r = check_constraints(&m, &m, &m, 1.25e-3, 1.25e-3);
        assert!(r.entries.iter().all(|e| e.margin == 0.0 && !e.satisfied));
        assert_eq!(r.verdict, Verdict::Indeterminate);
    }

    #[test]
    fn constraint_verdicts() {
        let (e10, ds10, ds30) = (ecoflex_00_10(), dragon_skin_10(), dragon_skin_30());
        let d = DEFAULT_LAYER_THICKNESS;
        assert_eq!(check_constraints(&e10, &ds10, &ds10, d, d).verdict, Verdict::Attenuating);
        let amp = check_constraints(&ds30, &e10, &e10, d, d);
        assert_eq!(amp.verdict, Verdict::Amplifying);
        assert!(amp.entries[2].margin < 0.0 && amp.entries[3].margin < 0.0);
    }

    #[test]
    fn constraint_terms_are_exponents_per_metre() {
        let m = ecoflex_00_10();
        let p = crate::elastic::attenuation_exponent(&m, 1.0, 1.0, WaveKind::Primary);
        let s = crate::elastic::attenuation_exponent(&m, 1.0, 1.0, WaveKind::Secondary);
        assert!((primary_slowness_term(&m) / p - 1.0).abs() < 1e-12);
        assert!((secondary_slowness_term(&m) / s - 1.0).abs() < 1e-12);
        let zp = impedance(&m, WaveKind::Primary);
        assert!((primary_impedance_term(&m) / (zp * zp) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn path_length_and_log_additivity() {
        let d = design(Family::Embedded, ecoflex_00_10(), dragon_skin_30());
        for kind in WaveKind::ALL {
            let path = transmission_path(&d, &skin(), 0.012, kind, ModelOptions::default()).unwrap();
            assert!((path.length() - 0.012).abs() < 1e-15);
            let logs: f64 = path.log_terms(OMEGA).iter().sum();
            assert!((logs - path.factor(OMEGA).ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn transmission_product_uses_interface_coefficients() {
        let (l1, l2, s) = (ecoflex_00_10(), dragon_skin_30(), skin());
        let d = design(Family::Encapsulating, l1.clone(), l2.clone());
        let path = transmission_path(&d, &s, 0.01, WaveKind::Primary, ModelOptions::default()).unwrap();
        let kt = |a: &Material, b: &Material| interface_coefficients(a, b, WaveKind::Primary).unwrap().transmission;
        assert_eq!(path.transmission_product(), kt(&s, &l1) * kt(&l1, &l2) * kt(&l2, &s));
    }

    #[test]
    fn air_outer_medium_for_shear_doubles() {
        let d = design(Family::Encapsulating, ecoflex_00_10(), dragon_skin_30());
        let o = ModelOptions {
            outer_medium: OuterMedium::Air,
            coupling: Coupling::Complete,
        };
        let path = transmission_path(&d, &skin(), 0.01, WaveKind::Secondary, o).unwrap();
        let exit = path
            .steps
            .iter()
            .rev()
            .find_map(|s| match s {
                PathStep::Cross { to, coefficients, .. } => Some((to.clone(), coefficients.transmission)),
                _ => None,
            })
            .unwrap();
        assert_eq!(exit, ("air".to_string(), 2.0));
    }

    #[test]
    fn zero_thickness_single_layer_is_bare_skin() {
        let s = skin();
        let d = HapticUnitDesign::single_layer(dragon_skin_30(), 0.0, DEFAULT_INNER_RADIUS).unwrap();
        for kind in WaveKind::ALL {
            let f = transmitted_amplitude_factor(&d, &s, OMEGA, 0.01, kind, ModelOptions::default()).unwrap();
            let bare = attenuation_factor(&s, OMEGA, DEFAULT_INNER_RADIUS, kind)
                * attenuation_factor(&s, OMEGA, 0.01 - DEFAULT_INNER_RADIUS, kind);
            assert_eq!(f, bare);
        }
    }

    #[test]
    fn design_file_round_trip() {
        let catalog = crate::materials::silicones::catalog();
        let d = design(Family::Embedded, ecoflex_00_10(), dragon_skin_30());
        let text = design_to_string(&d);
        assert_eq!(parse_design(&text, Path::new("mem"), &catalog).unwrap(), d);
        let bad = text.replace("DS-30", "unobtainium");
        assert!(matches!(
            parse_design(&bad, Path::new("mem"), &catalog),
            Err(Error::UnknownMaterial(_))
        ));
    }
}
