use crate::geometry::GeometryError;
use crate::oracle::OracleError;
use crate::pcheeger::PCheegerError;
use crate::profile::ProfileError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    PCheeger(#[from] PCheegerError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("invalid option: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Failure classes, in the order of the process exit codes 2, 3, 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Input,
    Neck,
    Numerical,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use ErrorKind::*;
        let geometry = |g: &GeometryError| match g {
            GeometryError::Numerical(_) => Numerical,
            _ => Input,
        };
        let profile = |p: &ProfileError| match p {
            ProfileError::Geometry(g) => geometry(g),
            ProfileError::NeckDetected { .. } => Neck,
            ProfileError::KappaBelowInverseInradius { .. } | ProfileError::VolumeOutOfRange { .. } => Input,
            _ => Numerical,
        };
        match self {
            Error::Geometry(g) => geometry(g),
            Error::Profile(p) => profile(p),
            Error::PCheeger(PCheegerError::Profile(p)) => profile(p),
            Error::PCheeger(_) => Input,
            Error::Oracle(OracleError::NoSignChange) => Numerical,
            Error::Oracle(_) => Input,
            Error::Config(_) | Error::Io { .. } | Error::Json(_) => Input,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            ErrorKind::Input => 2,
            ErrorKind::Neck => 3,
            ErrorKind::Numerical => 4,
        }
    }

    /// Machine-readable form written to stderr by the CLI.
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::json!({
            "error": self.to_string(),
            "kind": self.kind(),
            "exit_code": self.exit_code(),
        });
        if let Some(report) = self.neck_report() {
            v["no_neck"] = serde_json::to_value(report).unwrap_or_default();
        }
        v
    }

    fn neck_report(&self) -> Option<&crate::geometry::NoNeckReport> {
        match self {
            Error::Profile(ProfileError::NeckDetected { report, .. })
            | Error::PCheeger(PCheegerError::Profile(ProfileError::NeckDetected { report, .. })) => Some(report),
            _ => None,
        }
    }
}
