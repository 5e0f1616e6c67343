use thiserror::Error;

/// Process exit statuses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExitCode {
    Success = 0,
    InputError = 2,
    ResourceBound = 3,
    Consistency = 4,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Instance {
        path: String,
        source: qsim::Error,
    },

    #[error(transparent)]
    Sim(#[from] qsim::Error),

    #[error("{0}")]
    Usage(String),

    #[error("output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Io { .. } | CliError::Usage(_) | CliError::Output(_) => ExitCode::InputError,
            CliError::Instance { source, .. } | CliError::Sim(source) => sim_exit_code(source),
        }
    }
}

fn sim_exit_code(e: &qsim::Error) -> ExitCode {
    use qsim::Error::*;
    match e {
        Parse { .. } | InvalidArgument(_) | IndexOutOfRange { .. } | ComponentRange { .. } => {
            ExitCode::InputError
        }
        ResourceBound { .. } => ExitCode::ResourceBound,
        _ => ExitCode::Consistency,
    }
}
