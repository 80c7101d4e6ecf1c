use std::fmt;

/// Failures the driver reports, each with its own exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad configuration, input file or output location.
    Config(String),
    /// A saved artifact disagrees with the in-memory result.
    Verification(String),
    /// The optimizer produced a non-finite cost.
    Divergence(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Verification(_) => 3,
            CliError::Divergence(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "error: {m}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
            CliError::Divergence(m) => write!(f, "diverged: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<vans_core::Error> for CliError {
    fn from(e: vans_core::Error) -> Self {
        match e {
            vans_core::Error::Divergence(m) => CliError::Divergence(m),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(e.to_string())
    }
}
