use thiserror::Error;

use crate::graph::PathId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("no edge {edge_index} on path {path}")]
    Addressing { path: PathId, edge_index: usize },

    #[error("unknown vertex {0}")]
    UnknownVertex(String),

    #[error("vertex {vertex} is not on path {path}")]
    NotOnPath { path: PathId, vertex: String },

    #[error("vertex {v} precedes {u} on path {path}")]
    Ordering { path: PathId, u: String, v: String },

    #[error("label overflow on path {path} edge {edge_index}")]
    Overflow { path: PathId, edge_index: usize },

    #[error("structurally invalid switch at {vertex} from path {from} to path {to}")]
    InvalidSwitch {
        vertex: String,
        from: PathId,
        to: PathId,
    },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid instance: {}", .0.join("; "))]
    InvalidInstance(Vec<String>),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("resource limit exceeded: {what} needs {needed} but the limit is {limit}")]
    ResourceLimit {
        what: &'static str,
        needed: u128,
        limit: u128,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
