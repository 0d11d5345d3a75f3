use std::fmt;

/// Process exit codes.
pub mod code {
    pub const PASS: u8 = 0;
    pub const FAILURE: u8 = 1;
    pub const PARSE: u8 = 2;
    pub const SHAPE: u8 = 3;
    pub const PRECONDITION: u8 = 4;
    pub const USAGE: u8 = 64;
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        CliError::new(code::PARSE, message)
    }

    pub fn usage(message: impl Into<String>) -> Self {
        CliError::new(code::USAGE, message)
    }

    pub fn precondition(message: impl Into<String>) -> Self {
        CliError::new(code::PRECONDITION, message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Errors raised by an operation on already loaded inputs.
impl From<piso::Error> for CliError {
    fn from(e: piso::Error) -> Self {
        use piso::Error::*;
        let code = match &e {
            ShapeMismatch(_) | TargetSourceMismatch => code::SHAPE,
            InvalidTolerance(_) => code::USAGE,
            InvariantViolation(_) => code::FAILURE,
            _ => code::PRECONDITION,
        };
        CliError::new(code, e.to_string())
    }
}
