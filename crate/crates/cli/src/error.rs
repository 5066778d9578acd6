use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// A malformed document, annotated with its source and position.
    #[error("{source_name}: {message}")]
    Input { source_name: String, message: String },
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] ainfty::Error),
}

impl CliError {
    pub fn input(source: &str, message: impl std::fmt::Display) -> CliError {
        CliError::Input { source_name: source.to_string(), message: message.to_string() }
    }

    /// Weight-window problems exit with 2, everything else with 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(ainfty::Error::Weight(_)) => 2,
            _ => 1,
        }
    }
}
