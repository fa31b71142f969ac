use std::path::PathBuf;

use thiserror::Error;
use tsecon::Period;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("missing column `{0}`")]
    MissingColumn(String),
    #[error("parse error at line {line}, column `{column}`: {message}")]
    Parse { line: usize, column: String, message: String },
    #[error("gap in monthly data: {missing} is missing")]
    Gap { missing: Period },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: tsecon::Error,
    },
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// 2 config, 3 data (including I/O), 4 numerical failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::MissingColumn(_) | CliError::Parse { .. } | CliError::Gap { .. } | CliError::Io { .. } => 3,
            CliError::Stage { source, .. } => match source {
                tsecon::Error::RankDeficient { .. }
                | tsecon::Error::NotPositiveDefinite(_)
                | tsecon::Error::ConvergenceFailure(_)
                | tsecon::Error::SingularCovariance => 4,
                tsecon::Error::Domain(_)
                | tsecon::Error::Range(_)
                | tsecon::Error::Index(_)
                | tsecon::Error::InvalidSpec(_) => 2,
                _ => 3,
            },
        }
    }
}

/// Tags a library error with the stage that raised it.
pub(crate) trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T>;
}

impl<T> StageExt<T> for tsecon::Result<T> {
    fn stage(self, stage: &'static str) -> Result<T> {
        self.map_err(|source| CliError::Stage { stage, source })
    }
}
