use std::path::PathBuf;

use stransform_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("at z = {z}: {source}")]
    AtZ { z: f64, source: CoreError },
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("verification failed: {}", failed.join(", "))]
    VerifyFailed { failed: Vec<String> },
}

impl LabError {
    /// 1 for failed checks, 2 for everything the caller should fix.
    pub fn exit_code(&self) -> u8 {
        match self {
            LabError::VerifyFailed { .. } => 1,
            _ => 2,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LabError::Io { path: path.into(), source }
    }
}

pub(crate) fn at_z(z: f64) -> impl Fn(CoreError) -> LabError {
    move |source| LabError::AtZ { z, source }
}

pub type LabResult<T> = std::result::Result<T, LabError>;
