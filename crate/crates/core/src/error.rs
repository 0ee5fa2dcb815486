use thiserror::Error;

use crate::cube::Edge;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("invalid face: {0}")]
    Face(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// An outmap claims the same direction at both ends of an edge.
    #[error("inconsistent orientation at edge {edge}")]
    InvalidOrientation { edge: Edge },

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("orientation is not a unique sink orientation")]
    NotUso,

    #[error("edge set is not a union of phases (first offending edge {0})")]
    NotUnionOfPhases(Edge),

    #[error("edge set is not a matching: edges {0} and {1} share a vertex")]
    NotAMatching(Edge, Edge),

    #[error("face {0} is not a hypervertex")]
    NotHypervertex(String),

    #[error("gadget error: {0}")]
    Gadget(String),

    /// A structural theorem failed on a concrete input. Never expected.
    #[error("invariant violated: {0}")]
    InvariantViolated(String),
}

pub type Result<T> = std::result::Result<T, Error>;
