use std::fmt;

/// Process exit status. The numeric values are a stable contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    Internal = 1,
    Usage = 2,
    Domain = 3,
}

impl Exit {
    pub fn code(self) -> u8 {
        self as u8
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub exit: Exit,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { exit: Exit::Usage, message: message.into() }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        CliError { exit: Exit::Internal, message: message.into() }
    }

    pub fn domain(message: impl Into<String>) -> Self {
        CliError { exit: Exit::Domain, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<fcip_core::Error> for CliError {
    fn from(e: fcip_core::Error) -> Self {
        use fcip_core::Error as E;
        let exit = match &e {
            e if e.is_domain() => Exit::Domain,
            E::NonConvergence(_) | E::Diverged(_) => Exit::Internal,
            _ => Exit::Usage,
        };
        CliError { exit, message: e.to_string() }
    }
}

pub type CliResult<T> = Result<T, CliError>;
