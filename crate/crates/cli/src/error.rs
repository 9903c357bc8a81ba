use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    /// Malformed JSON, with the position reported by the parser.
    #[error("{origin}: {message}")]
    Parse {
        origin: String,
        line: usize,
        column: usize,
        message: String,
    },
    /// Well-formed input that breaks a documented rule; `context` names the
    /// offending field or lottery.
    #[error("{origin}: {context}: {message}")]
    Invalid {
        origin: String,
        context: String,
        message: String,
    },
    #[error(transparent)]
    Core(#[from] affectq_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(origin: &str, err: &serde_json::Error) -> Self {
        CliError::Parse {
            origin: origin.to_string(),
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }

    pub(crate) fn invalid(origin: &str, context: impl Into<String>, message: impl ToString) -> Self {
        CliError::Invalid {
            origin: origin.to_string(),
            context: context.into(),
            message: message.to_string(),
        }
    }
}
