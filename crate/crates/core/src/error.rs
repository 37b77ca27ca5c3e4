use thiserror::Error;

use crate::dectree::Violation;
use crate::graph::VertexSet;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("malformed decomposition tree: {}", join_violations(.0))]
    Structure(Vec<Violation>),

    #[error("unknown tree node {0}")]
    UnknownNode(usize),

    #[error("graph is not distance-hereditary (stuck on vertices {remnant})")]
    NotDistanceHereditary { remnant: VertexSet },

    #[error("k = {k} out of range 0..={ts_size}")]
    KOutOfRange { k: usize, ts_size: usize },

    #[error("inconsistent node state: {0}")]
    Inconsistent(String),

    #[error("no paired-dominating set exists")]
    NoWitness,

    #[error("instance has {n} vertices, oracle limit is {limit}")]
    OracleGuard { n: usize, limit: usize },
}

fn join_violations(vs: &[Violation]) -> String {
    vs.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
