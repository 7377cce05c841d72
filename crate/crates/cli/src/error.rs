use thiserror::Error;

/// Failure classes, each with its own process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("assertion failed: {0}")]
    Assertion(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Schema(_) => 3,
            CliError::Assertion(_) => 4,
        }
    }

    pub fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        CliError::Parse(format!("{}: {e}", path.display()))
    }
}

impl From<skewflow::Error> for CliError {
    fn from(e: skewflow::Error) -> Self {
        use skewflow::Error as E;
        match e {
            E::InvalidDepth
            | E::InvalidBaseDimension
            | E::ZeroJEntry { .. }
            | E::JZeroNotOne { .. }
            | E::ShortJSequence { .. }
            | E::ProfileLength { .. }
            | E::RecursionFailure { .. }
            | E::DegreeOverflow { .. }
            | E::Integrality { .. } => CliError::Validation(e.to_string()),
            E::Parse(msg) => CliError::Parse(msg),
            other => CliError::Parse(other.to_string()),
        }
    }
}
