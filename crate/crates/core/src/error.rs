use thiserror::Error;

/// Errors raised by the simulation and analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("size constraint violated: {0}")]
    SizeConstraint(String),

    #[error("invalid graph: {reason} (edge {u}-{v})")]
    InvalidGraph { u: usize, v: usize, reason: String },

    #[error("unsupported graph: {0}")]
    UnsupportedGraph(String),

    #[error("resource cap exceeded: {0}")]
    Resource(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("degenerate state: {0}")]
    DegenerateState(String),

    #[error("numeric failure: {message} (achieved residual {residual:e})")]
    Numeric { message: String, residual: f64 },

    #[error("series did not converge after {terms} terms (last term {last_term:e})")]
    Convergence { terms: usize, last_term: f64, partial_re: f64, partial_im: f64 },

    #[error("argument out of supported range: {0}")]
    Range(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
