//! Stack configuration file: `[[layer]]` tables from the surface down, each
//! with the catalog material fields plus `bottom_depth_m`, and one
//! `[substrate]` table.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Layer, SkinStack};
use crate::error::{Error, Result};
use crate::materials::MaterialRecord;

/// Text of the default forearm stack.
pub const DEFAULT_FOREARM_TOML: &str = include_str!("../../data/forearm.toml");

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LayerRecord {
    name: Option<String>,
    #[serde(rename = "E_pa")]
    elastic_modulus: Option<f64>,
    nu: Option<f64>,
    rho_kg_m3: Option<f64>,
    eta_pa_s: Option<f64>,
    bottom_depth_m: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StackFile {
    #[serde(default)]
    layer: Vec<LayerRecord>,
    substrate: Option<MaterialRecord>,
}

impl LayerRecord {
    fn material_record(&self) -> MaterialRecord {
        MaterialRecord {
            name: self.name.clone(),
            elastic_modulus: self.elastic_modulus,
            nu: self.nu,
            rho_kg_m3: self.rho_kg_m3,
            eta_pa_s: self.eta_pa_s,
        }
    }
}

/// Parses stack text; `origin` only labels errors.
pub fn parse_stack(text: &str, origin: &Path) -> Result<SkinStack> {
    let file: StackFile = toml::from_str(text).map_err(|e| Error::parse(origin, e))?;
    let layers = file
        .layer
        .iter()
        .enumerate()
        .map(|(i, rec)| {
            let material = rec.material_record().into_material(i)?;
            let bottom_depth = rec.bottom_depth_m.ok_or_else(|| {
                Error::InvalidStack(format!("layer {i} (`{}`): missing `bottom_depth_m`", material.name()))
            })?;
            Ok(Layer {
                material,
                bottom_depth,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let substrate = file
        .substrate
        .ok_or_else(|| Error::InvalidStack("missing `[substrate]` table".into()))?
        .into_material(layers.len())?;
    SkinStack::new(layers, substrate)
}

pub fn load_stack(path: impl AsRef<Path>) -> Result<SkinStack> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_stack(&text, path)
}

/// Canonical stack text; also the input of [`SkinStack::content_hash`].
pub fn stack_to_string(stack: &SkinStack) -> String {
    let layer = stack
        .layers()
        .iter()
        .map(|l| {
            let m = &l.material;
            LayerRecord {
                name: Some(m.name().to_string()),
                elastic_modulus: Some(m.elastic_modulus()),
                nu: Some(m.poisson_ratio()),
                rho_kg_m3: Some(m.density()),
                eta_pa_s: Some(m.viscosity()),
                bottom_depth_m: Some(l.bottom_depth),
            }
        })
        .collect();
    let file = StackFile {
        layer,
        substrate: Some(MaterialRecord::from_material(stack.substrate())),
    };
    toml::to_string(&file).expect("stack records always serialize")
}
