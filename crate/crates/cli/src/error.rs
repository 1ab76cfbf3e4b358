use imprecise_core::Error;

/// Failure of a command, split by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Malformed input: exit code 1.
    #[error("{0}")]
    Input(String),
    /// A mathematical precondition does not hold: exit code 2.
    #[error("{0}")]
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Precondition(_) => 2,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::EmptySpace
            | Error::DuplicateLabel(_)
            | Error::UnknownLabel(_)
            | Error::SpaceMismatch
            | Error::LengthMismatch { .. }
            | Error::IndexOutOfRange { .. }
            | Error::InvalidRational(_)
            | Error::NotALattice
            | Error::InvalidCountVector(_)
            | Error::InvalidArgument(_) => CliError::Input(e.to_string()),
            Error::SureLoss
            | Error::NoInvariantDominator
            | Error::NotWeaklyInvariant
            | Error::NotStronglyInvariant
            | Error::NotAGroup
            | Error::TruncatedClosure(_)
            | Error::VertexCapExceeded { .. }
            | Error::Infeasible
            | Error::PositivityViolated
            | Error::CapExceeded { .. } => CliError::Precondition(e.to_string()),
        }
    }
}
