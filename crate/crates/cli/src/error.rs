use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] geomis_core::Error),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// 0 success, 2 invalid input, 3 caps exceeded, 4 structural violation.
    pub fn exit_code(&self) -> i32 {
        use geomis_core::Error as E;
        match self {
            CliError::Input(_) | CliError::Io { .. } => 2,
            CliError::Core(e) => match e {
                E::InputsNotDisjoint(..) | E::GeneralPositionViolated(_) | E::OutsideFrame(_) | E::InvalidInput(_) => 2,
                E::CapExceeded(_) => 3,
                E::DegenerateSeparator | E::CuttingFailed(_) | E::CutFailed(_) | E::EncodingFailure(_) | E::Structural(_) => 4,
            },
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
