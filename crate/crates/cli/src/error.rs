use std::fmt;

use numdiff_core::Error as CoreError;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    /// Unexpected IO failure while writing output.
    Io = 1,
    /// Bad arguments, unparsable input, invalid stencil or parameters.
    Usage = 2,
    /// Non-uniform grid or mismatched time axes.
    Grid = 3,
    /// Model singularity on the grid or at the evaluation point.
    Singularity = 4,
    /// Observed order differs from the theoretical order by more than 0.5.
    OrderMismatch = 5,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: line {line}, column {column}: {message}")]
    Parse {
        path: String,
        line: u64,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn usage(message: impl fmt::Display) -> Self {
        CliError::Usage(message.to_string())
    }

    pub fn io(context: impl fmt::Display, source: std::io::Error) -> Self {
        CliError::Io {
            context: context.to_string(),
            source,
        }
    }

    pub fn status(&self) -> ExitStatus {
        match self {
            CliError::Usage(_) | CliError::Parse { .. } => ExitStatus::Usage,
            CliError::Io { .. } => ExitStatus::Io,
            CliError::Core(e) => core_status(e),
        }
    }
}

fn core_status(e: &CoreError) -> ExitStatus {
    if e.singular_time().is_some() {
        return ExitStatus::Singularity;
    }
    match e {
        CoreError::NonUniformGrid { .. } | CoreError::GridMismatch(_) => ExitStatus::Grid,
        CoreError::Evaluation { cause, .. } => core_status(cause),
        _ => ExitStatus::Usage,
    }
}
