use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config syntax error: {0}")]
    Syntax(String),

    #[error("config field `{field}`: {message}")]
    Constraint { field: String, message: String },

    #[error("{context}: {source}")]
    Numeric {
        context: &'static str,
        #[source]
        source: degfrac_core::Error,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("verification mismatch: {0}")]
    Verify(String),
}

impl CliError {
    pub(crate) fn constraint(field: &str, message: impl Into<String>) -> Self {
        CliError::Constraint { field: field.to_string(), message: message.into() }
    }

    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Syntax(_) | CliError::Constraint { .. } => 2,
            CliError::Verify(_) => 3,
            _ => 1,
        }
    }
}

pub(crate) trait NumericContext<T> {
    fn context(self, context: &'static str) -> Result<T>;
}

impl<T> NumericContext<T> for degfrac_core::Result<T> {
    fn context(self, context: &'static str) -> Result<T> {
        self.map_err(|source| CliError::Numeric { context, source })
    }
}
