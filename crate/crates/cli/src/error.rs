//! Command failures and their process exit codes.

use thiserror::Error;

/// Exit status of a successful run.
pub const EXIT_OK: i32 = 0;
/// Output could not be written.
pub const EXIT_IO: i32 = 1;
/// Unreadable or malformed input, or a bad command line.
pub const EXIT_PARSE: i32 = 2;
/// Input parsed but violates the structural constraints of its type.
pub const EXIT_VALIDATION: i32 = 3;
/// Synthesis failed, or a transfer function was evaluated at a pole.
pub const EXIT_SYNTHESIS: i32 = 4;
/// The realization does not reproduce the source transfer function.
pub const EXIT_VERIFICATION: i32 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("synthesis error: {0}")]
    Synthesis(lqss_core::Error),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("cannot write output: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => EXIT_IO,
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Synthesis(_) => EXIT_SYNTHESIS,
            CliError::Verification(_) => EXIT_VERIFICATION,
        }
    }
}

impl From<lqss_core::Error> for CliError {
    fn from(e: lqss_core::Error) -> Self {
        use lqss_core::Error as E;
        match e {
            E::Validation(r) => CliError::Validation(r.to_string()),
            E::Dimension(m) => CliError::Validation(m),
            E::Parameter(m) => CliError::Parse(m),
            other => CliError::Synthesis(other),
        }
    }
}
