use thiserror::Error;

/// Process exit status for usage and input problems.
pub const EXIT_INPUT: i32 = 2;
/// Process exit status when a default consistency constant is undefined.
pub const EXIT_UNDEFINED_CONSTANT: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Core(#[from] qad_core::Error),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(qad_core::Error::UndefinedConstant { .. }) => EXIT_UNDEFINED_CONSTANT,
            _ => EXIT_INPUT,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
