use std::fmt;

use idstat::exactnum::ExactError;
use idstat::observables::ObservableError;
use idstat::perm::PermError;
use idstat::statmech::StatmechError;
use idstat::symmetry::SymmetryError;

/// Failure classes with their process exit codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Exit 2.
    Input(String),
    /// Exit 3.
    BoseDivergence(String),
    /// Exit 4.
    Capacity(String),
    /// Exit 1.
    VerifyFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::BoseDivergence(_) => 3,
            CliError::Capacity(_) => 4,
            CliError::VerifyFailed(_) => 1,
        }
    }

    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "invalid input: {m}"),
            CliError::BoseDivergence(m) => write!(f, "{m}"),
            CliError::Capacity(m) => write!(f, "{m}"),
            CliError::VerifyFailed(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<StatmechError> for CliError {
    fn from(e: StatmechError) -> Self {
        match e {
            StatmechError::BoseDivergence { .. } => CliError::BoseDivergence(e.to_string()),
            StatmechError::CapacityExceeded(_) | StatmechError::CutoffTooLarge(_) => CliError::Capacity(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<PermError> for CliError {
    fn from(e: PermError) -> Self {
        match e {
            PermError::CapacityExceeded(_) => CliError::Capacity(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<ExactError> for CliError {
    fn from(e: ExactError) -> Self {
        match e {
            ExactError::RadicandCapacity(_) => CliError::Capacity(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<SymmetryError> for CliError {
    fn from(e: SymmetryError) -> Self {
        match e {
            SymmetryError::Perm(p) => p.into(),
            SymmetryError::Exact(x) => x.into(),
            SymmetryError::CapacityExceeded(_) => CliError::Capacity(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<ObservableError> for CliError {
    fn from(e: ObservableError) -> Self {
        match e {
            ObservableError::Symmetry(s) => s.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
