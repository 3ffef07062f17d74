use std::fmt;

use serde::Serialize;

/// CLI failure, classified by exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Malformed or invalid configuration (exit 2).
    Config(String),
    /// Missing, unreadable or invalid input files (exit 3).
    Input(String),
    /// Failure while computing a stage (exit 4).
    Runtime(String),
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    error: &'a str,
    exit_code: i32,
    message: &'a str,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Input(_) => 3,
            CliError::Runtime(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Input(_) => "input",
            CliError::Runtime(_) => "runtime",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Input(m) | CliError::Runtime(m) => m,
        }
    }

    /// One-line JSON record for stderr.
    pub fn record(&self) -> String {
        serde_json::to_string(&ErrorRecord { error: self.kind(), exit_code: self.exit_code(), message: self.message() })
            .expect("plain record serializes")
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} error: {}", self.kind(), self.message())
    }
}

impl std::error::Error for CliError {}

impl From<mathex::Error> for CliError {
    fn from(e: mathex::Error) -> Self {
        use mathex::Error::*;
        match e {
            Parse { .. } | Markup { .. } | Io { .. } | Validation(_) => CliError::Input(e.to_string()),
            Domain(_) | Training(_) | Serde(_) => CliError::Runtime(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
