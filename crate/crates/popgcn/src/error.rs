//! IO-aware error type with machine-readable categories for the CLI.

use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] popgcn_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Format {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn format(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    /// Stable category slug, printed as `error[<category>]: ...` and mapped
    /// onto the exit code.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Usage(_) => "usage",
            Error::Io { .. } => "io",
            Error::Format { .. } | Error::Json { .. } => "format",
            Error::Core(core) => categorize_core(core),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.category() {
            "usage" => 2,
            "config" => 3,
            "io" => 4,
            "format" => 5,
            "data" => 6,
            "numeric" => 7,
            _ => 1,
        }
    }
}

fn categorize_core(e: &popgcn_core::Error) -> &'static str {
    use popgcn_core::Error as Core;
    match e {
        Core::InvalidConfig { .. } | Core::NonPositiveLambdaMax { .. } => "config",
        Core::NonFiniteActivation { .. } | Core::NonFiniteLoss { .. } | Core::NonConvergentFit { .. } => {
            "numeric"
        }
        Core::Member { source, .. } | Core::Fold { source, .. } => categorize_core(source),
        _ => "data",
    }
}
