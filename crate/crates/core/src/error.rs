use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed graph description; `line` is 1-based.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("operator is not Hermitian (deviation {0:e})")]
    NonHermitian(f64),

    /// A singular value fell inside the window around the rank threshold.
    #[error("rank decision ambiguous: singular value {value:e} too close to threshold {threshold:e}")]
    RankAmbiguous { value: f64, threshold: f64 },

    #[error("spectral parameter {z} lies within {radius:e} of the Dirichlet spectrum point {sigma}")]
    NearDirichlet { z: String, sigma: f64, radius: f64 },

    #[error("vertex datum is not in the kernel of Q(lambda): residual {residual:e}")]
    NotInKernel { residual: f64 },

    #[error("path enumeration exceeded the cap of {0} paths")]
    EnumerationOverflow(usize),

    #[error("size cap exceeded: {0}")]
    SizeCap(String),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}
