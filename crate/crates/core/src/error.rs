use thiserror::Error;

use crate::sdp::{FeasibilityReport, GramSolution};

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failures while reading the graph edge-list format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: vertex {vertex} outside 1..={n}")]
    VertexOutOfRange { line: usize, vertex: i64, n: usize },
    #[error("line {line}: multiplicity must be positive, got {value}")]
    BadMultiplicity { line: usize, value: i64 },
    #[error("line {line}: missing `p edge <n> <m>` header")]
    MissingHeader { line: usize },
    #[error("line {line}: second `p` header")]
    DuplicateHeader { line: usize },
}

impl ParseError {
    /// 1-based line the error refers to; 0 means end of input.
    pub fn line(&self) -> usize {
        match *self {
            ParseError::Malformed { line, .. }
            | ParseError::VertexOutOfRange { line, .. }
            | ParseError::BadMultiplicity { line, .. }
            | ParseError::MissingHeader { line }
            | ParseError::DuplicateHeader { line } => line,
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("malformed {what} file, line {line}: {reason}")]
    Format {
        what: &'static str,
        line: usize,
        reason: String,
    },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid colouring: {0}")]
    InvalidColouring(String),
    #[error("value undefined: graph has no edges")]
    EmptyEdgeSet,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("relaxation solver did not converge (best objective {:.6}, violation {:.3e})", best.objective, report.max_violation())]
    NonConvergence {
        best: Box<GramSolution>,
        report: FeasibilityReport,
    },
    #[error("quadrature did not reach tolerance {tolerance:e}: best estimate {estimate} with error {error:e}")]
    Quadrature {
        estimate: f64,
        error: f64,
        tolerance: f64,
    },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error(
        "derandomisation parameter error: s = {s} has discretisation budget {budget:.3e} > eps/2 = {half_eps:.3e}; minimal feasible s: {}",
        min_feasible.map(|s| s.to_string()).unwrap_or_else(|| "none up to the search limit".into())
    )]
    DerandParameter {
        s: u32,
        budget: f64,
        half_eps: f64,
        min_feasible: Option<u32>,
    },
    #[error("derandomised rounding reached {achieved:.6} below the target {target:.6}")]
    DerandShortfall { achieved: f64, target: f64 },
    #[error("F_T inequality violated at {witness:?}: sum {lhs} < bound {bound}")]
    FtViolation {
        witness: Vec<f64>,
        lhs: f64,
        bound: f64,
    },
    #[error("invalid Markov operator: {0}")]
    InvalidOperator(String),
    #[error("invalid label-cover instance: {0}")]
    InvalidLabelCover(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
