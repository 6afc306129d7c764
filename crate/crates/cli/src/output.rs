//! Run bookkeeping: input hashing, output files and the manifest.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use skinwave_core::io::sha256_hex;

use crate::{EXIT_NUMERICAL, EXIT_USAGE, EXIT_VALIDATION};

pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Validation(String),
    Core(skinwave_core::Error),
    Write { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(e) if e.is_numerical() => EXIT_NUMERICAL,
            _ => EXIT_VALIDATION,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Validation(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Write { path, source } => write!(f, "cannot write {}: {source}", path.display()),
        }
    }
}

impl From<skinwave_core::Error> for CliError {
    fn from(e: skinwave_core::Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileRecord {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

/// Everything needed to reproduce a run. Holds no timestamps or absolute
/// output locations, so repeated runs write identical manifests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: Map<String, Value>,
    pub inputs: Vec<FileRecord>,
    pub outputs: Vec<FileRecord>,
    pub warnings: Vec<String>,
}

pub struct RunContext {
    out: PathBuf,
    manifest: Manifest,
}

impl RunContext {
    pub fn new(command: &str, out: &Path) -> CliResult<Self> {
        std::fs::create_dir_all(out).map_err(|source| CliError::Write {
            path: out.to_path_buf(),
            source,
        })?;
        Ok(Self {
            out: out.to_path_buf(),
            manifest: Manifest {
                tool: env!("CARGO_PKG_NAME").to_string(),
                version: env!("CARGO_PKG_VERSION").to_string(),
                command: command.to_string(),
                config: Map::new(),
                inputs: Vec::new(),
                outputs: Vec::new(),
                warnings: Vec::new(),
            },
        })
    }

    pub fn config(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.manifest.config.insert(key.to_string(), v);
    }

    pub fn warn(&mut self, message: String) {
        eprintln!("warning: {message}");
        self.manifest.warnings.push(message);
    }

    /// Reads an input file and records its hash. A missing file is a usage
    /// error.
    pub fn read_input(&mut self, path: &Path) -> CliResult<String> {
        let bytes = std::fs::read(path).map_err(|e| {
            CliError::Usage(format!("cannot read input {}: {e}", path.display()))
        })?;
        self.manifest.inputs.push(FileRecord {
            path: path.display().to_string(),
            sha256: sha256_hex(&bytes),
            bytes: bytes.len() as u64,
        });
        String::from_utf8(bytes)
            .map_err(|_| CliError::Validation(format!("{} is not UTF-8 text", path.display())))
    }

    pub fn write(&mut self, name: &str, contents: &str) -> CliResult<PathBuf> {
        let path = self.out.join(name);
        std::fs::write(&path, contents).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        })?;
        self.manifest.outputs.push(FileRecord {
            path: name.to_string(),
            sha256: sha256_hex(contents.as_bytes()),
            bytes: contents.len() as u64,
        });
        Ok(path)
    }

    pub fn write_json(&mut self, name: &str, value: &impl Serialize) -> CliResult<PathBuf> {
        let mut text = serde_json::to_string_pretty(value)
            .map_err(|e| CliError::Validation(format!("cannot serialize {name}: {e}")))?;
        text.push('\n');
        self.write(name, &text)
    }

    pub fn finish(self) -> CliResult<Manifest> {
        let mut text = serde_json::to_string_pretty(&self.manifest)
            .map_err(|e| CliError::Validation(format!("cannot serialize manifest: {e}")))?;
        text.push('\n');
        let path = self.out.join(MANIFEST_NAME);
        std::fs::write(&path, text).map_err(|source| CliError::Write { path, source })?;
        Ok(self.manifest)
    }
}

/// Fixed 12-significant-digit rendering used in every numeric output.
pub fn num(v: f64) -> String {
    format!("{v:.11e}")
}
