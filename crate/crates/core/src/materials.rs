//! Homogeneous linear viscoelastic media, stress-strain modulus fitting and
//! the material catalog file.
//!
//! Only the elastic modulus of the encapsulation silicones is known from
//! tensile tests. Poisson's ratio, density and viscosity fall back to
//! [`DEFAULT_POISSON_RATIO`], [`DEFAULT_DENSITY`] and [`DEFAULT_VISCOSITY`]
//! whenever a catalog record leaves them out.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Near-incompressible elastomer.
pub const DEFAULT_POISSON_RATIO: f64 = 0.49;
/// kg/m³, platinum-cure silicone.
pub const DEFAULT_DENSITY: f64 = 1070.0;
/// Pa·s.
pub const DEFAULT_VISCOSITY: f64 = 5.0;

/// Default strain window for [`fit_modulus`].
pub const DEFAULT_STRAIN_WINDOW: StrainWindow = StrainWindow { min: 0.0, max: 0.3 };

/// One homogeneous isotropic medium.
#[derive(Debug, Clone, PartialEq)]
pub struct Material {
    name: String,
    elastic_modulus: f64,
    poisson_ratio: f64,
    density: f64,
    viscosity: f64,
}

impl Material {
    /// Validating constructor. `elastic_modulus` in Pa, `density` in kg/m³,
    /// `viscosity` in Pa·s.
    pub fn new(
        name: impl Into<String>,
        elastic_modulus: f64,
        poisson_ratio: f64,
        density: f64,
        viscosity: f64,
    ) -> Result<Self> {
        let name = name.into();
        let invalid = |reason: &str| Error::InvalidMaterial {
            name: name.clone(),
            reason: reason.to_string(),
        };
        for (label, value) in [
            ("E", elastic_modulus),
            ("nu", poisson_ratio),
            ("rho", density),
            ("eta", viscosity),
        ] {
            if !value.is_finite() {
                return Err(invalid(&format!("{label} is not finite")));
            }
        }
        if elastic_modulus <= 0.0 {
            return Err(invalid("elastic modulus must be positive"));
        }
        if density <= 0.0 {
            return Err(invalid("density must be positive"));
        }
        if viscosity < 0.0 {
            return Err(invalid("viscosity must be non-negative"));
        }
        if poisson_ratio <= -1.0 {
            return Err(invalid("Poisson's ratio must exceed -1"));
        }
        if poisson_ratio >= 0.5 {
            return Err(Error::Incompressible {
                name,
                nu: poisson_ratio,
            });
        }
        Ok(Self {
            name,
            elastic_modulus,
            poisson_ratio,
            density,
            viscosity,
        })
    }

    /// A silicone known only by its modulus; the remaining fields take the
    /// crate defaults.
    pub fn silicone(name: impl Into<String>, elastic_modulus: f64) -> Result<Self> {
        Self::new(
            name,
            elastic_modulus,
            DEFAULT_POISSON_RATIO,
            DEFAULT_DENSITY,
            DEFAULT_VISCOSITY,
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Young's modulus, Pa.
    pub fn elastic_modulus(&self) -> f64 {
        self.elastic_modulus
    }

    pub fn poisson_ratio(&self) -> f64 {
        self.poisson_ratio
    }

    /// kg/m³.
    pub fn density(&self) -> f64 {
        self.density
    }

    /// Pa·s.
    pub fn viscosity(&self) -> f64 {
        self.viscosity
    }

    /// Same medium under another name.
    pub fn renamed(&self, name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ..self.clone()
        }
    }

    /// Copy with a different modulus; the other fields are kept.
    pub fn with_elastic_modulus(&self, elastic_modulus: f64) -> Result<Self> {
        Self::new(
            self.name.clone(),
            elastic_modulus,
            self.poisson_ratio,
            self.density,
            self.viscosity,
        )
    }

    /// Copy with a different viscosity.
    pub fn with_viscosity(&self, viscosity: f64) -> Result<Self> {
        Self::new(
            self.name.clone(),
            self.elastic_modulus,
            self.poisson_ratio,
            self.density,
            viscosity,
        )
    }

    /// Lamé constants. Never fails: the constructor already rejected
    /// `nu >= 0.5`.
    pub fn lame(&self) -> LameConstants {
        lame_from(self.elastic_modulus, self.poisson_ratio)
    }
}

/// Lamé's first parameter and the shear modulus, both in Pa.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LameConstants {
    pub lambda: f64,
    pub mu: f64,
}

fn lame_from(e: f64, nu: f64) -> LameConstants {
    LameConstants {
        lambda: e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)),
        mu: e / (2.0 * (1.0 + nu)),
    }
}

/// Converts (E, ν) to (λ, μ).
pub fn lame_constants(material: &Material) -> Result<LameConstants> {
    check_compressible(material.name(), material.poisson_ratio())?;
    Ok(material.lame())
}

/// Same conversion on raw values, for callers that have not built a
/// [`Material`] yet.
pub fn lame_constants_raw(elastic_modulus: f64, poisson_ratio: f64) -> Result<LameConstants> {
    check_compressible("<raw>", poisson_ratio)?;
    Ok(lame_from(elastic_modulus, poisson_ratio))
}

fn check_compressible(name: &str, nu: f64) -> Result<()> {
    if nu >= 0.5 || nu.is_nan() {
        return Err(Error::Incompressible {
            name: name.to_string(),
            nu,
        });
    }
    Ok(())
}

/// The three encapsulation silicones characterised in tension.
pub mod silicones {
    use super::Material;

    pub const ECOFLEX_00_10_MODULUS: f64 = 15.0e3;
    pub const DRAGON_SKIN_10_MODULUS: f64 = 250.0e3;
    pub const DRAGON_SKIN_30_MODULUS: f64 = 355.0e3;

    pub fn ecoflex_00_10() -> Material {
        Material::silicone("E-10", ECOFLEX_00_10_MODULUS).expect("valid constant")
    }

    pub fn dragon_skin_10() -> Material {
        Material::silicone("DS-10", DRAGON_SKIN_10_MODULUS).expect("valid constant")
    }

    pub fn dragon_skin_30() -> Material {
        Material::silicone("DS-30", DRAGON_SKIN_30_MODULUS).expect("valid constant")
    }

    /// E-10, DS-10, DS-30 in that order.
    pub fn catalog() -> Vec<Material> {
        vec![ecoflex_00_10(), dragon_skin_10(), dragon_skin_30()]
    }
}

// ---------------------------------------------------------------------------
// Stress-strain fitting

/// Tensile test record: strictly increasing strains with engineering stress.
#[derive(Debug, Clone, PartialEq)]
pub struct StressStrainCurve {
    samples: Vec<(f64, f64)>,
    source: String,
}

impl StressStrainCurve {
    pub fn new(samples: Vec<(f64, f64)>, source: impl Into<String>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::MalformedCurve(format!(
                "{} sample(s); at least 2 are required",
                samples.len()
            )));
        }
        if let Some((i, _)) = samples
            .iter()
            .enumerate()
            .find(|(_, (e, s))| !e.is_finite() || !s.is_finite())
        {
            return Err(Error::MalformedCurve(format!("sample {i} is not finite")));
        }
        if let Some(i) = samples.windows(2).position(|w| w[1].0 <= w[0].0) {
            return Err(Error::MalformedCurve(format!(
                "strain is not strictly increasing at sample {}",
                i + 1
            )));
        }
        Ok(Self {
            samples,
            source: source.into(),
        })
    }

    /// Reads the 2-column `strain,stress_pa` CSV (one header line).
    pub fn from_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| Error::parse(path, e))?;
        let mut samples = Vec::new();
        for (row, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::parse(path, e))?;
            if record.len() != 2 {
                return Err(Error::parse(
                    path,
                    format!("row {}: expected 2 columns, found {}", row + 1, record.len()),
                ));
            }
            let field = |i: usize| -> Result<f64> {
                record[i]
                    .parse::<f64>()
                    .map_err(|e| Error::parse(path, format!("row {}: {e}", row + 1)))
            };
            samples.push((field(0)?, field(1)?));
        }
        Self::new(samples, path.display().to_string())
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Multiplies every stress by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.samples.iter().map(|&(e, s)| (e, s * factor)).collect(),
            self.source.clone(),
        )
    }
}

/// Closed strain interval `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrainWindow {
    pub min: f64,
    pub max: f64,
}

impl StrainWindow {
    pub fn new(min: f64, max: f64) -> Self {
        Self { min, max }
    }

    fn contains(&self, strain: f64) -> bool {
        strain >= self.min && strain <= self.max
    }
}

impl Default for StrainWindow {
    fn default() -> Self {
        DEFAULT_STRAIN_WINDOW
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusFit {
    /// Pa.
    pub modulus: f64,
    pub strain_window: StrainWindow,
    /// Root-mean-square residual, Pa.
    pub residual_rms: f64,
    pub sample_count: usize,
    /// Stress intercept, Pa. Zero when the fit is forced through the origin.
    pub intercept: f64,
}

/// Least-squares slope of stress against strain inside `window`.
///
/// A window starting at zero strain forces the line through the origin;
/// otherwise an intercept is estimated alongside the slope and reported but
/// not used as part of the modulus.
pub fn fit_modulus(curve: &StressStrainCurve, window: StrainWindow) -> Result<ModulusFit> {
    let points: Vec<(f64, f64)> = curve
        .samples()
        .iter()
        .copied()
        .filter(|&(e, _)| window.contains(e))
        .collect();
    if points.len() < 2 {
        return Err(Error::InvalidWindow {
            min: window.min,
            max: window.max,
            count: points.len(),
        });
    }
    let n = points.len() as f64;

    let (slope, intercept) = if window.min == 0.0 {
        let sxy: f64 = points.iter().map(|(x, y)| x * y).sum();
        let sxx: f64 = points.iter().map(|(x, _)| x * x).sum();
        (sxy / sxx, 0.0)
    } else {
        let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
        let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = points
            .iter()
            .map(|(x, y)| (x - mean_x) * (y - mean_y))
            .sum();
        let sxx: f64 = points.iter().map(|(x, _)| (x - mean_x).powi(2)).sum();
        let slope = sxy / sxx;
        (slope, mean_y - slope * mean_x)
    };
    if !(slope.is_finite() && slope > 0.0) {
        return Err(Error::MalformedCurve(format!(
            "fitted slope {slope} is not a positive modulus"
        )));
    }

    let sse: f64 = points
        .iter()
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    Ok(ModulusFit {
        modulus: slope,
        strain_window: window,
        residual_rms: (sse / n).sqrt(),
        sample_count: points.len(),
        intercept,
    })
}

// ---------------------------------------------------------------------------
// Catalog file

/// One `[[material]]` table of a catalog file. Only `name` and `E_pa` are
/// mandatory.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialRecord {
    pub name: Option<String>,
    #[serde(rename = "E_pa")]
    pub elastic_modulus: Option<f64>,
    pub nu: Option<f64>,
    pub rho_kg_m3: Option<f64>,
    pub eta_pa_s: Option<f64>,
}

impl MaterialRecord {
    pub fn from_material(m: &Material) -> Self {
        Self {
            name: Some(m.name().to_string()),
            elastic_modulus: Some(m.elastic_modulus()),
            nu: Some(m.poisson_ratio()),
            rho_kg_m3: Some(m.density()),
            eta_pa_s: Some(m.viscosity()),
        }
    }

    /// Applies defaults and validates. `index` only labels errors.
    pub fn into_material(self, index: usize) -> Result<Material> {
        let name = self.name.clone().unwrap_or_default();
        let fail = |reason: String| Error::CatalogValidation {
            index,
            name: name.clone(),
            reason,
        };
        if self.name.as_deref().is_none_or(str::is_empty) {
            return Err(fail("missing field `name`".into()));
        }
        let e = self
            .elastic_modulus
            .ok_or_else(|| fail("missing field `E_pa`".into()))?;
        let nu = self.nu.unwrap_or(DEFAULT_POISSON_RATIO);
        let rho = self.rho_kg_m3.unwrap_or(DEFAULT_DENSITY);
        let eta = self.eta_pa_s.unwrap_or(DEFAULT_VISCOSITY);
        Material::new(name.clone(), e, nu, rho, eta).map_err(|err| fail(err.to_string()))
    }
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogFile {
    #[serde(default)]
    material: Vec<MaterialRecord>,
}

/// Parses catalog text. Names must be unique.
pub fn parse_catalog(text: &str, origin: &Path) -> Result<Vec<Material>> {
    let file: CatalogFile = toml::from_str(text).map_err(|e| Error::parse(origin, e))?;
    let materials = file
        .material
        .into_iter()
        .enumerate()
        .map(|(i, rec)| rec.into_material(i))
        .collect::<Result<Vec<_>>>()?;
    for (i, m) in materials.iter().enumerate() {
        if materials[..i].iter().any(|o| o.name() == m.name()) {
            return Err(Error::CatalogValidation {
                index: i,
                name: m.name().to_string(),
                reason: "duplicate name".into(),
            });
        }
    }
    Ok(materials)
}

pub fn load_catalog(path: impl AsRef<Path>) -> Result<Vec<Material>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_catalog(&text, path)
}

/// Canonical catalog text: every field written explicitly, declaration
/// order preserved.
pub fn catalog_to_string(materials: &[Material]) -> String {
    let file = CatalogFile {
        material: materials.iter().map(MaterialRecord::from_material).collect(),
    };
    toml::to_string(&file).expect("catalog records always serialize")
}

pub fn save_catalog(materials: &[Material], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, catalog_to_string(materials)).map_err(|e| Error::io(path, e))
}

/// Looks a material up by name.
pub fn find<'a>(catalog: &'a [Material], name: &str) -> Result<&'a Material> {
    catalog
        .iter()
        .find(|m| m.name() == name)
        .ok_or_else(|| Error::UnknownMaterial(name.to_string()))
}
