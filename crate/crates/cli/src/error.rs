use thiserror::Error;

/// Failure of a command, mapped onto the process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Inputs parsed but describe something invalid.
    #[error("{0}")]
    Invalid(String),
    /// Unreadable, unwritable or unparsable input.
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Io(_) => 2,
        }
    }

    pub fn io(context: impl std::fmt::Display, err: impl std::fmt::Display) -> Self {
        CliError::Io(format!("{context}: {err}"))
    }
}

impl From<fuzzychip::ga::GaError> for CliError {
    fn from(e: fuzzychip::ga::GaError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<fuzzychip::problems::ProblemError> for CliError {
    fn from(e: fuzzychip::problems::ProblemError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<fuzzychip::tracksim::TrackError> for CliError {
    fn from(e: fuzzychip::tracksim::TrackError) -> Self {
        use fuzzychip::tracksim::TrackError;
        match e {
            TrackError::Waypoint { .. } => CliError::Io(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<fuzzychip::flc::FlcError> for CliError {
    fn from(e: fuzzychip::flc::FlcError) -> Self {
        CliError::Invalid(e.to_string())
    }
}
