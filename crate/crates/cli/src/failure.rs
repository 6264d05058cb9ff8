use std::fmt;
use std::process::ExitCode;

/// A command failure, carrying the exit code it maps to.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, malformed data, or a model that rejects the input. Exit 2.
    Usage(String),
    /// Files could not be read or written. Exit 1.
    Io(String),
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Failure::Usage(msg.into())
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            Failure::Usage(_) => ExitCode::from(2),
            Failure::Io(_) => ExitCode::from(1),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(msg) | Failure::Io(msg) => f.write_str(msg),
        }
    }
}

impl From<ramnet_core::Error> for Failure {
    fn from(e: ramnet_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        if e.is_io_error() {
            Failure::Io(e.to_string())
        } else {
            Failure::Usage(format!("malformed CSV: {e}"))
        }
    }
}

pub type CliResult<T> = Result<T, Failure>;

/// How a command that ran to completion went.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Clean,
    /// Finished, but some rows could not be answered. Exit 3.
    Warnings,
}

impl Outcome {
    pub fn exit_code(self) -> ExitCode {
        match self {
            Outcome::Clean => ExitCode::SUCCESS,
            Outcome::Warnings => ExitCode::from(3),
        }
    }
}
