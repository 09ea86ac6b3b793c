use std::fmt;
use std::process::ExitCode;

use focalis::Error;

#[derive(Debug)]
pub enum CliError {
    /// Malformed input or configuration.
    Input(String),
    /// The curve does not support the requested computation.
    Geometry(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Input(_) => 2,
            CliError::Geometry(_) => 3,
            CliError::Io(_) => 4,
        })
    }

    /// A library failure at parameter `theta`.
    pub fn at(theta: f64, e: Error) -> Self {
        match CliError::from(e) {
            CliError::Geometry(msg) => CliError::Geometry(format!("at theta = {theta}: {msg}")),
            other => other,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Geometry(m) => write!(f, "geometry error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::ParseError { .. }
            | Error::UnknownBuiltin(_)
            | Error::NotPeriodic(_)
            | Error::OutsideDomain { .. }
            | Error::OrderTooLarge { .. }
            | Error::InsufficientOrder { .. } => CliError::Input(e.to_string()),
            _ => CliError::Geometry(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
