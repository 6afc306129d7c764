//! Error type shared by every module of the crate.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid material `{name}`: {reason}")]
    InvalidMaterial { name: String, reason: String },

    #[error("material `{name}` is incompressible (nu = {nu}); Lame lambda diverges at nu >= 0.5")]
    Incompressible { name: String, nu: f64 },

    #[error("catalog entry {index} (`{name}`): {reason}")]
    CatalogValidation {
        index: usize,
        name: String,
        reason: String,
    },

    #[error("malformed stress-strain curve: {0}")]
    MalformedCurve(String),

    #[error("strain window [{min}, {max}] holds {count} sample(s); at least 2 are required")]
    InvalidWindow { min: f64, max: f64, count: usize },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("degenerate interface: both impedances are zero")]
    DegenerateInterface,

    #[error("invalid skin stack: {0}")]
    InvalidStack(String),

    #[error("invalid load: {0}")]
    InvalidLoad(String),

    #[error(
        "boundary system is singular or ill-conditioned at k = {k:.6e} 1/m, omega = {omega:.6e} rad/s \
         (condition estimate {condition:.3e})"
    )]
    Conditioning { k: f64, omega: f64, condition: f64 },

    #[error(
        "wavenumber quadrature did not converge: relative change {relative_change:.3e} after {nodes} nodes \
         (tolerance {tolerance:.1e})"
    )]
    Accuracy {
        relative_change: f64,
        nodes: usize,
        tolerance: f64,
    },

    #[error("degenerate normalization: reference amplitude at r = {radius} m is zero")]
    DegenerateNormalization { radius: f64 },

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid design: {0}")]
    InvalidDesign(String),

    #[error("incomparable designs: {0}")]
    IncomparableDesigns(String),

    #[error("empty search space: {0}")]
    EmptySpace(String),

    #[error("invalid band [{low}, {high}] Hz: {reason}")]
    InvalidBand { low: f64, high: f64, reason: String },

    #[error("invalid trace: {0}")]
    InvalidTrace(String),

    #[error("unknown material `{0}`")]
    UnknownMaterial(String),

    #[error("parse error in {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.to_string(),
        }
    }

    /// True for failures of the numerical machinery itself (as opposed to
    /// bad inputs). Front ends map these to a distinct exit status.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Conditioning { .. }
                | Error::Accuracy { .. }
                | Error::DegenerateNormalization { .. }
                | Error::DegenerateInterface
        )
    }
}
