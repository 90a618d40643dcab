use std::path::PathBuf;

use thiserror::Error;

use crate::dynamics::DynamicsError;
use crate::model::ModelError;
use crate::scattering::ScatteringError;

/// Exit status for configuration and validation failures.
pub const EXIT_CONFIG: i32 = 2;
/// Exit status for numerical failures (instability, singular points).
pub const EXIT_NUMERICAL: i32 = 3;
/// Exit status for I/O and serialization failures.
pub const EXIT_IO: i32 = 1;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration at `{field}`: {message}")]
    Config { field: String, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Scattering(#[from] ScatteringError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("serialization: {0}")]
    Serialization(String),
}

impl Error {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Config { field: field.into(), message: message.into() }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            "config" => EXIT_CONFIG,
            "numerical" => EXIT_NUMERICAL,
            _ => EXIT_IO,
        }
    }

    /// `config`, `numerical` or `io`.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Config { .. } | Self::Model(_) => "config",
            Self::Dynamics(DynamicsError::Unstable { .. }) => "numerical",
            Self::Dynamics(_) => "config",
            Self::Scattering(ScatteringError::Singular { .. }) => "numerical",
            Self::Scattering(_) => "config",
            Self::Io { .. } | Self::Serialization(_) => "io",
        }
    }

    /// Offending configuration field, when known.
    pub fn field(&self) -> Option<&str> {
        match self {
            Self::Config { field, .. } => Some(field),
            Self::Model(ModelError::InvalidParameter { field, .. }) => Some(field),
            Self::Scattering(ScatteringError::InvalidInput { field, .. }) => Some(field),
            _ => None,
        }
    }

    /// Machine-readable error record.
    pub fn to_record(&self) -> serde_json::Value {
        let mut record = serde_json::json!({
            "kind": self.kind(),
            "exit_code": self.exit_code(),
            "message": self.to_string(),
        });
        if let Some(field) = self.field() {
            record["field"] = field.into();
        }
        if let Self::Dynamics(DynamicsError::Unstable { dt, .. } | DynamicsError::InvalidStep { dt, .. }) = self {
            record["dt"] = (*dt).into();
        }
        record
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(Error::config("N", "bad").exit_code(), 2);
        assert_eq!(Error::from(ModelError::invalid("J", "must be > 0")).exit_code(), 2);
        let unstable = Error::from(DynamicsError::Unstable { dt: 0.5, t: 1.0, norm: 2.0 });
        assert_eq!(unstable.exit_code(), 3);
        assert_eq!(unstable.to_record()["dt"], 0.5);
        let singular = Error::from(ScatteringError::Singular { k: 1.0, n_sep: 2, theta: 0.0, reason: "D = 0".into() });
        assert_eq!(singular.exit_code(), 3);
        let io = Error::io("/nope", std::io::Error::other("denied"));
        assert_eq!(io.exit_code(), 1);
    }

    #[test]
    fn record_names_the_field() {
        let r = Error::config("packet.m0", "support exceeds grid").to_record();
        assert_eq!(r["field"], "packet.m0");
        assert_eq!(r["kind"], "config");
    }
}
