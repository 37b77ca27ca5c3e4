//! Paired domination on distance-hereditary graphs.
//!
//! A *paired-dominating set* of a graph is a dominating set whose induced
//! subgraph has a perfect matching; `γ_p` is the smallest size of one. For a
//! distance-hereditary graph given by a decomposition tree, [`solve`] computes
//! `γ_p` with one constant-time combine per tree node, and optionally a
//! minimum witness set.
//!
//! ```
//! use pdom_core::{fixtures, solve, Gamma};
//!
//! let tree = fixtures::fig1_tree();
//! let result = solve(&tree, true).unwrap();
//! assert_eq!(result.gamma_p, Gamma::Finite(2));
//! let witness = result.witness.unwrap();
//! assert!(fixtures::fig1_graph().is_paired_dominating(&witness).unwrap());
//! ```
//!
//! Modules:
//! - [`graph`]: graphs, domination and matching predicates.
//! - [`dectree`]: decomposition trees, expansion, random generation, JSON format.
//! - [`recognition`]: build a tree for a graph by pendant/twin pruning.
//! - [`dp`]: the per-node state, its combine rules, solving and witnesses.
//! - [`oracle`]: exhaustive reference implementations for small inputs.

#![forbid(unsafe_code)]

pub mod dectree;
pub mod dp;
mod error;
pub mod fixtures;
pub mod graph;
pub mod oracle;
pub mod recognition;

pub use dectree::{generate, DecompTree, Expansion, Node, NodeId, Op, OpWeights, TreeBuilder};
pub use dp::{solve, Gamma, NodeState, SolveResult};
pub use error::{Error, Result};
pub use graph::{Graph, VertexSet};
pub use recognition::{
    decompose, find_reduction, is_distance_hereditary, Reduction, ReductionKind,
};
