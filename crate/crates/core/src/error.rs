use thiserror::Error;

use crate::graph::TessellationViolation;
use crate::schedule::ScheduleViolation;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad failure category, used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Invalid input data or a violated structural invariant.
    Domain,
    /// A numerical procedure failed to produce a result.
    Numeric,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop on node {node}")]
    SelfLoop { node: usize },

    #[error("node index {node} out of range for a graph with {node_count} nodes")]
    NodeOutOfRange { node: usize, node_count: usize },

    #[error("a path needs at least one node")]
    EmptyPath,

    #[error("lattice needs at least one dimension")]
    EmptyDimensions,

    #[error("lattice dimension {axis} has size 0")]
    ZeroDimension { axis: usize },

    #[error("graph is not triangle-free: nodes {0:?} are mutually adjacent")]
    NotTriangleFree((usize, usize, usize)),

    #[error("invalid tessellation {index}: {}", join(.violations))]
    InvalidTessellation {
        index: usize,
        violations: Vec<TessellationViolation>,
    },

    #[error("tessellations leave {} edge(s) uncovered, first {first:?}", .uncovered)]
    UncoveredEdges { uncovered: usize, first: (usize, usize) },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state is not normalized (squared norm {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("walk angle must be finite, got {0}")]
    NonFiniteAngle(f64),

    #[error("spread statistics need a non-empty history")]
    EmptyHistory,

    #[error("mode index must be at least 1")]
    InvalidModeIndex,

    #[error(
        "no root of the mode equation in branch ({lo}, {hi}) for mode {mode}: \
         f(lo) = {f_lo}, f(hi) = {f_hi}"
    )]
    NoRootInBranch {
        mode: usize,
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("fixed-point iteration for the off configuration did not settle after {0} rounds")]
    NoFixedPoint(usize),

    #[error(
        "coupling cannot be switched off: need chi_l = {target:.6}, but |chi_l|_max = {chi_l_max:.6} \
         (increase E_J by a factor of at least {:.6})",
        .target / .chi_l_max
    )]
    FluxOffUnreachable { target: f64, chi_l_max: f64 },

    #[error("coupling strength is zero or non-finite ({0}); pulse duration undefined")]
    ZeroCoupling(f64),

    #[error("pulse duration is zero; the walk angle is a multiple of 2π")]
    ZeroDuration,

    #[error("invalid circuit parameter {name} = {value}: must be finite and > 0")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("matrix of size {size} exceeds the oracle limit {limit}")]
    OracleTooLarge { size: usize, limit: usize },

    #[error("Taylor series did not converge within {0} terms")]
    SeriesDidNotConverge(usize),

    #[error("JSON parse error at byte {offset} (line {line}, column {column}): {message}")]
    Parse {
        offset: usize,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("invalid schedule: {}", join(.0))]
    InvalidSchedule(Vec<ScheduleViolation>),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::NoRootInBranch { .. }
            | Error::NoFixedPoint(_)
            | Error::SeriesDidNotConverge(_)
            | Error::ZeroCoupling(_) => ErrorClass::Numeric,
            _ => ErrorClass::Domain,
        }
    }

    /// Wraps a `serde_json` error, resolving its line/column to a byte offset in `text`.
    pub(crate) fn from_json(err: serde_json::Error, text: &str) -> Self {
        let (line, column) = (err.line(), err.column());
        let offset = byte_offset(text, line, column);
        Error::Parse {
            offset,
            line,
            column,
            message: err.to_string(),
        }
    }
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let line_start: usize = text.split_inclusive('\n').take(line - 1).map(str::len).sum();
    (line_start + column).min(text.len())
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn byte_offset_counts_previous_lines() {
        let text = "ab\ncde\nf";
        assert_eq!(byte_offset(text, 1, 2), 2);
        assert_eq!(byte_offset(text, 2, 1), 4);
        assert_eq!(byte_offset(text, 3, 1), 8);
        assert_eq!(byte_offset(text, 9, 9), text.len());
    }
}
