use thiserror::Error;

/// Failures surfaced by commands, grouped by process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("input: {0}")]
    Parse(String),

    #[error("numeric: {0}")]
    Numeric(String),

    #[error("output: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Parse(_) | CliError::Io(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }
}

impl From<bnvar::Error> for CliError {
    fn from(e: bnvar::Error) -> Self {
        use bnvar::Error as E;
        let msg = e.to_string();
        match e {
            E::Parse { .. } | E::InvalidGraph(_) | E::Inconsistent(_) | E::NotSymmetric(_) => CliError::Parse(msg),
            E::Domain(_) | E::NoConvergence { .. } => CliError::Numeric(msg),
            E::InvalidArgument(_) => CliError::Usage(msg),
            E::Replicate { source, .. } => match CliError::from(*source) {
                CliError::Usage(_) => CliError::Usage(msg),
                CliError::Parse(_) => CliError::Parse(msg),
                CliError::Io(_) => CliError::Io(msg),
                CliError::Numeric(_) => CliError::Numeric(msg),
            },
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
