use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown algorithm {0:?}")]
    UnknownAlgorithm(String),

    #[error("I/O error: {0}")]
    Io(String),

    #[error(transparent)]
    Core(#[from] substream::Error),
}

impl BenchError {
    /// Process exit code: 2 parse, 3 unknown algorithm, 4 I/O, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Parse(_) | Self::Core(substream::Error::Parse { .. }) => 2,
            Self::UnknownAlgorithm(_) => 3,
            Self::Io(_) => 4,
            Self::Core(_) => 1,
        }
    }
}

impl From<std::io::Error> for BenchError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

impl From<csv::Error> for BenchError {
    fn from(e: csv::Error) -> Self {
        if e.is_io_error() {
            Self::Io(e.to_string())
        } else {
            Self::Parse(e.to_string())
        }
    }
}

pub type Result<T, E = BenchError> = std::result::Result<T, E>;
