use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    #[error("quadrature did not converge in {op}: {msg}")]
    Quadrature { op: &'static str, msg: String },

    #[error("Gauss-Jacobi node solver did not converge at node {node} (order {order})")]
    NodeSolver { order: usize, node: usize },

    #[error("phi'(r) vanishes at r = {r}")]
    Singular { r: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("value {x} outside tabulated range [{lo}, {hi}]")]
    Extrapolation { x: f64, lo: f64, hi: f64 },

    #[error("curve rejected: {} of {} grid points failed (first at r = {}: {})", .failures.len(), .total, .failures[0].0, .failures[0].1)]
    CurveRejected {
        total: usize,
        failures: Vec<(f64, String)>,
    },

    #[error("evaluation failed at every grid point: {0}")]
    AllPointsFailed(String),

    #[error("level set is empty: {0}")]
    EmptyLevelSet(String),

    #[error("eigensolver failure: {0}")]
    Eigen(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain {
            op,
            msg: msg.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
