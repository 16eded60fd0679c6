use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed input text: config syntax, unknown keys, bad literals.
    #[error("parse error: {0}")]
    Parse(String),

    /// Well-formed input outside the model's domain.
    #[error("invalid input: {0}")]
    Validation(String),

    /// Memory budget exceeded.
    #[error("resource limit: {0}")]
    Resource(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Resource(_) | CliError::Io { .. } => 4,
        }
    }
}

impl From<thermosup::Error> for CliError {
    fn from(e: thermosup::Error) -> Self {
        match e {
            thermosup::Error::MemoryBudget { .. } => CliError::Resource(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}
