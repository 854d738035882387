use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] burstsync::Error),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// Process exit status: 2 for usage errors, 3 when a cap refuses the
    /// request, 1 for anything else.
    pub fn exit_code(&self) -> i32 {
        use burstsync::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(E::CapExceeded { .. } | E::DeletionCapExceeded { .. }) => 3,
            CliError::Core(
                E::InvalidParams { .. }
                | E::InvalidArgument(_)
                | E::ParseBits(_)
                | E::InvalidBit(_),
            ) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
