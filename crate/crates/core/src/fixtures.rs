//! The seven-vertex example graph used throughout the docs and tests.
//!
//! Vertices `v1..v7` map to ids `0..6`.

use crate::dectree::{DecompTree, Op, TreeBuilder};
use crate::graph::Graph;

pub const FIG1_EDGES: [(usize, usize); 13] = [
    (0, 1),
    (0, 2),
    (3, 5),
    (3, 6),
    (4, 5),
    (4, 6),
    (3, 4),
    (3, 0),
    (3, 1),
    (3, 2),
    (4, 0),
    (4, 1),
    (4, 2),
];

pub fn fig1_graph() -> Graph {
    Graph::from_edges(7, &FIG1_EDGES).expect("fixture edges are valid")
}

/// Root `⊗`, left `⊗(v1, ⊙(v2, v3))`, right `⊕(⊗(v4, v5), ⊙(v6, v7))`.
pub fn fig1_tree() -> DecompTree {
    fig1_tree_with_root(Op::TrueTwin)
}

/// The same tree with an arbitrary root operation. `⊕` also expands to the
/// same graph, with twin set `{v1, v2, v3}`.
pub fn fig1_tree_with_root(root_op: Op) -> DecompTree {
    let mut b = TreeBuilder::new();
    let v1 = b.leaf(0);
    let v2 = b.leaf(1);
    let v3 = b.leaf(2);
    let f23 = b.join(Op::FalseTwin, v2, v3);
    let left = b.join(Op::TrueTwin, v1, f23);
    let v4 = b.leaf(3);
    let v5 = b.leaf(4);
    let t45 = b.join(Op::TrueTwin, v4, v5);
    let v6 = b.leaf(5);
    let v7 = b.leaf(6);
    let f67 = b.join(Op::FalseTwin, v6, v7);
    let right = b.join(Op::Attach, t45, f67);
    let root = b.join(root_op, left, right);
    b.finish(root).expect("fixture tree is valid")
}

/// Text form of the fixture graph, with the vertex naming documented.
pub fn fig1_graph_text() -> String {
    let mut out = String::from("# example graph: v1..v7 are ids 0..6\n");
    out.push_str(&fig1_graph().to_text());
    out
}
