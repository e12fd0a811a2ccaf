/// CLI failure split by exit code: configuration problems exit with 2,
/// runtime problems with 3.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }

    /// Wraps a core error that surfaced while building components from a
    /// config file.
    pub fn from_build(err: mh_core::Error) -> Self {
        CliError::Config(err.to_string())
    }

    /// Wraps a core error that surfaced while running a sampler.
    pub fn from_run(err: mh_core::Error) -> Self {
        CliError::Runtime(err.to_string())
    }

    pub fn io(context: &str, err: std::io::Error) -> Self {
        CliError::Runtime(format!("{context}: {err}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
