use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("state has no nonzero amplitude")]
    DegenerateState,

    #[error("state is not normalized (squared norm {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("value {value} does not fit in {width} bits")]
    Overflow { value: u64, width: usize },

    #[error("amplitude component {value} outside [-1, 1]")]
    ComponentRange { value: f64 },

    #[error("computational instability: {0}")]
    Instability(String),

    #[error("internal consistency violation: {0}")]
    Consistency(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{what} = {value} exceeds the supported bound {max}")]
    ResourceBound {
        what: &'static str,
        value: usize,
        max: usize,
    },
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}
