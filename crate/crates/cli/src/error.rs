use thiserror::Error;

/// Exit code 2: usage or validation failure.
pub const EXIT_USAGE: i32 = 2;
/// Exit code 3: accuracy or consistency failure.
pub const EXIT_ACCURACY: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{flag}: {message}")]
    Usage { flag: String, message: String },
    #[error("{0}")]
    Accuracy(String),
    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    pub fn usage(flag: &str, message: impl std::fmt::Display) -> Self {
        CliError::Usage {
            flag: flag.to_string(),
            message: message.to_string(),
        }
    }

    /// Maps a library error raised while handling `flag`.
    pub fn from_core(flag: &str, e: mginf::Error) -> Self {
        use mginf::Error as E;
        match e {
            E::NonFinite { .. } | E::Accuracy { .. } | E::Consistency(_) => CliError::Accuracy(e.to_string()),
            other => CliError::usage(flag, other),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage { .. } | CliError::Output(_) => EXIT_USAGE,
            CliError::Accuracy(_) => EXIT_ACCURACY,
        }
    }
}
