use std::fmt;

/// Exit codes: 0 ok, 2 parse, 3 invariant, 4 resource cap, 1 anything else.
#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Invariant(String),
    Cap(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Invariant(_) => 3,
            CliError::Cap(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(msg) => write!(f, "parse error: {msg}"),
            CliError::Invariant(msg) => write!(f, "invariant violation: {msg}"),
            CliError::Cap(msg) => write!(f, "resource cap: {msg}"),
            CliError::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl From<stallings::Error> for CliError {
    fn from(e: stallings::Error) -> Self {
        use stallings::Error::*;
        match e {
            UnknownGenerator(_) | WordSyntax { .. } | InvalidAlphabet(_) | InvalidNielsen(_)
            | ImageCount { .. } => CliError::Parse(e.to_string()),
            MonoidCapExceeded { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Invariant(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
