use thiserror::Error;

/// Failure modes shared by every module of the laboratory.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of the gamma function near {re} + {im}i")]
    Pole { re: f64, im: f64 },

    #[error("result overflows the floating-point range ({0})")]
    Overflow(&'static str),

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("no convergence: {0}")]
    Convergence(String),

    #[error("every grid point was excluded")]
    EmptyGrid,

    #[error("resource budget exceeded: {what} (limit {limit})")]
    Resource { what: &'static str, limit: usize },

    #[error("derivation could not be traced: {0}")]
    TraceDepth(String),

    #[error("reduction depth exceeded: {0}")]
    Depth(String),
}

impl Error {
    /// Stable machine-readable tag used in structured CLI output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Pole { .. } => "pole",
            Error::Overflow(_) => "overflow",
            Error::Domain(_) => "domain",
            Error::Convergence(_) => "convergence",
            Error::EmptyGrid => "empty_grid",
            Error::Resource { .. } => "resource",
            Error::TraceDepth(_) => "trace_depth",
            Error::Depth(_) => "depth",
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
