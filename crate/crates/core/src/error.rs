use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid truncation n_max = {0}: at least 2 photons are needed to hold the second excitation manifold")]
    InvalidTruncation(usize),

    #[error("invalid dot index {0}: expected 1 or 2")]
    InvalidDotIndex(usize),

    #[error("invalid excitation manifold n = {0}: expected n >= 1")]
    InvalidManifold(usize),

    #[error("shape mismatch: expected {expected}x{expected}, found {rows}x{cols}")]
    Shape { expected: usize, rows: usize, cols: usize },

    #[error("value {0} is outside the domain [0, 1]")]
    Domain(f64),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("negative eigenvalue {0:e} exceeds the clamping tolerance")]
    NegativeEigenvalue(f64),

    #[error("eigensolver did not converge: {0}")]
    Eigen(String),

    #[error("step size underflow at t = {t} ps (|rho|_max = {norm:e}); the problem is too stiff for the requested tolerance")]
    Stiffness { t: f64, norm: f64 },

    #[error("top Fock level population {population:e} at t = {t} ps exceeds the guard; increase n_max above {n_max}")]
    Truncation { t: f64, population: f64, n_max: usize },

    #[error("at t = {t} ps: {source}")]
    AtTime {
        t: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("unknown preset '{name}'; valid presets: {}", crate::scenarios::PRESET_NAMES.join(", "))]
    UnknownPreset { name: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    ParseConfig {
        path: PathBuf,
        #[source]
        source: toml::de::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by bad user input rather than numerics or I/O.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidTruncation(_)
                | Error::InvalidDotIndex(_)
                | Error::InvalidManifold(_)
                | Error::UnknownPreset { .. }
                | Error::Config(_)
                | Error::ParseConfig { .. }
        )
    }

    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Domain(_)
            | Error::InvalidState(_)
            | Error::NegativeEigenvalue(_)
            | Error::Eigen(_)
            | Error::Stiffness { .. }
            | Error::Truncation { .. }
            | Error::Shape { .. } => true,
            Error::AtTime { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}
