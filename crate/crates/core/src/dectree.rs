//! Decomposition trees: full binary trees whose leaves are vertices and whose
//! internal nodes combine the two child graphs by a true-twin (`⊗`), false-twin
//! (`⊙`) or attachment (`⊕`) operation on their twin sets.
//!
//! Node ids index into a flat arena. Trees built by this crate are laid out in
//! post-order (children before parents, left subtree first), but any layout is
//! accepted as long as [`DecompTree::validate`] passes.

use std::fmt;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    /// `⊗`: join the twin sets completely, twin set is the union.
    TrueTwin,
    /// `⊙`: disjoint union, twin set is the union.
    FalseTwin,
    /// `⊕`: join the twin sets completely, twin set is the left one.
    Attach,
}

impl Op {
    pub fn code(self) -> &'static str {
        match self {
            Op::TrueTwin => "T",
            Op::FalseTwin => "F",
            Op::Attach => "A",
        }
    }

    pub fn from_code(code: &str) -> Option<Op> {
        match code {
            "T" => Some(Op::TrueTwin),
            "F" => Some(Op::FalseTwin),
            "A" => Some(Op::Attach),
            _ => None,
        }
    }

    /// Whether the operation adds the complete bipartite edges between twin sets.
    pub fn joins(self) -> bool {
        !matches!(self, Op::FalseTwin)
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Op::TrueTwin => "⊗",
            Op::FalseTwin => "⊙",
            Op::Attach => "⊕",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Node {
    Leaf { vertex: usize },
    Internal { op: Op, left: NodeId, right: NodeId },
}

/// A structural defect found by [`DecompTree::validate`] or while reading a tree file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Empty,
    RootOutOfRange {
        root: NodeId,
    },
    ChildOutOfRange {
        node: NodeId,
        child: NodeId,
    },
    /// Both child slots point at the same node, so the node has one child.
    SingleChild {
        node: NodeId,
    },
    /// An internal node in a tree file lacks its `l` or `r` entry.
    MissingChild {
        op_index: usize,
        side: &'static str,
    },
    MultipleParents {
        node: NodeId,
    },
    RootHasParent,
    Unreachable {
        node: NodeId,
    },
    DuplicateVertex {
        vertex: usize,
    },
    VertexOutOfRange {
        vertex: usize,
        n: usize,
    },
    MissingVertex {
        vertex: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "tree has no nodes"),
            Violation::RootOutOfRange { root } => write!(f, "root {root} is not a node"),
            Violation::ChildOutOfRange { node, child } => {
                write!(f, "node {node} references missing child {child}")
            }
            Violation::SingleChild { node } => write!(f, "internal node {node} has one child"),
            Violation::MissingChild { op_index, side } => {
                write!(f, "internal node #{op_index} lacks its {side:?} child")
            }
            Violation::MultipleParents { node } => write!(f, "node {node} has several parents"),
            Violation::RootHasParent => write!(f, "root is a child of another node"),
            Violation::Unreachable { node } => {
                write!(f, "node {node} is unreachable from the root")
            }
            Violation::DuplicateVertex { vertex } => {
                write!(f, "vertex {vertex} appears on several leaves")
            }
            Violation::VertexOutOfRange { vertex, n } => {
                write!(f, "leaf vertex {vertex} out of range for {n} leaves")
            }
            Violation::MissingVertex { vertex } => write!(f, "vertex {vertex} has no leaf"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DecompTree {
    nodes: Vec<Node>,
    root: NodeId,
    /// Known valid, with every child stored before its parent and the root
    /// last, so a plain index sweep is a post-order. Lets repeated solves skip
    /// validation and traversal.
    checked_post_order: bool,
}

impl PartialEq for DecompTree {
    fn eq(&self, other: &Self) -> bool {
        self.root == other.root && self.nodes == other.nodes
    }
}

impl Eq for DecompTree {}

/// The graph defined by a (sub)tree together with its twin set.
///
/// `graph` uses local ids `0..vertices.len()`; local id `i` stands for
/// `vertices[i]`. For a whole tree the mapping is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    pub graph: Graph,
    pub twin_set: VertexSet,
    pub vertices: Vec<usize>,
}

impl DecompTree {
    /// Wraps the parts without checking them; see [`DecompTree::validate`].
    pub fn from_parts(nodes: Vec<Node>, root: NodeId) -> Self {
        Self {
            nodes,
            root,
            checked_post_order: false,
        }
    }

    /// Wraps and validates.
    pub fn new(nodes: Vec<Node>, root: NodeId) -> Result<Self> {
        let mut t = Self::from_parts(nodes, root);
        t.validate().map_err(Error::Structure)?;
        t.checked_post_order = t.root + 1 == t.nodes.len()
            && t.nodes.iter().enumerate().all(|(id, node)| match *node {
                Node::Internal { left, right, .. } => left < id && right < id,
                Node::Leaf { .. } => true,
            });
        Ok(t)
    }

    pub fn single(vertex: usize) -> Self {
        Self {
            nodes: vec![Node::Leaf { vertex }],
            root: 0,
            checked_post_order: true,
        }
    }

    /// Whether the tree is known to be valid and stored in post-order
    /// (children before parents, root last). True for trees from
    /// [`DecompTree::new`] in that layout and for canonicalized valid trees.
    pub fn is_checked_post_order(&self) -> bool {
        self.checked_post_order
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> Result<&Node> {
        self.nodes.get(id).ok_or(Error::UnknownNode(id))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Number of leaves, which is the vertex count of the expansion.
    pub fn leaf_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::Leaf { .. }))
            .count()
    }

    /// Checks the structural invariants, collecting every violation found.
    pub fn validate(&self) -> std::result::Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        let len = self.nodes.len();
        if len == 0 {
            return Err(vec![Violation::Empty]);
        }
        if self.root >= len {
            return Err(vec![Violation::RootOutOfRange { root: self.root }]);
        }

        let mut parents = vec![0u32; len];
        for (id, node) in self.nodes.iter().enumerate() {
            if let Node::Internal { left, right, .. } = *node {
                for child in [left, right] {
                    if child >= len {
                        out.push(Violation::ChildOutOfRange { node: id, child });
                    } else {
                        parents[child] += 1;
                    }
                }
                if left == right {
                    out.push(Violation::SingleChild { node: id });
                }
            }
        }
        if parents[self.root] > 0 {
            out.push(Violation::RootHasParent);
        }
        for (id, &p) in parents.iter().enumerate() {
            if p > 1 && !(p == 2 && self.has_single_child_parent(id)) {
                out.push(Violation::MultipleParents { node: id });
            }
        }

        let mut seen = vec![false; len];
        let mut stack = vec![self.root];
        seen[self.root] = true;
        while let Some(id) = stack.pop() {
            if let Node::Internal { left, right, .. } = self.nodes[id] {
                for child in [left, right] {
                    if child < len && !seen[child] {
                        seen[child] = true;
                        stack.push(child);
                    }
                }
            }
        }
        out.extend(
            seen.iter()
                .enumerate()
                .filter(|(_, &s)| !s)
                .map(|(node, _)| Violation::Unreachable { node }),
        );

        let n = self.leaf_count();
        let mut hits = vec![0u32; n];
        for node in &self.nodes {
            if let Node::Leaf { vertex } = *node {
                if vertex < n {
                    hits[vertex] += 1;
                    if hits[vertex] == 2 {
                        out.push(Violation::DuplicateVertex { vertex });
                    }
                } else {
                    out.push(Violation::VertexOutOfRange { vertex, n });
                }
            }
        }
        out.extend(
            hits.iter()
                .enumerate()
                .filter(|(_, &h)| h == 0)
                .map(|(vertex, _)| Violation::MissingVertex { vertex }),
        );

        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    // a node referenced twice by one single-child parent is reported once, as SingleChild
    fn has_single_child_parent(&self, id: NodeId) -> bool {
        self.nodes
            .iter()
            .any(|n| matches!(*n, Node::Internal { left, right, .. } if left == id && right == id))
    }

    /// Nodes of the subtree at `start` in post-order (left, right, parent).
    ///
    /// Assumes the tree is valid; iterative so depth is unbounded.
    pub fn post_order_from(&self, start: NodeId) -> Vec<NodeId> {
        let mut order = Vec::new();
        let mut stack = vec![(start, false)];
        while let Some((id, expanded)) = stack.pop() {
            match self.nodes[id] {
                Node::Internal { left, right, .. } if !expanded => {
                    stack.push((id, true));
                    stack.push((right, false));
                    stack.push((left, false));
                }
                _ => order.push(id),
            }
        }
        order
    }

    pub fn post_order(&self) -> Vec<NodeId> {
        self.post_order_from(self.root)
    }

    /// Vertices at the leaves below `node`, ascending.
    pub fn leaves_below(&self, node: NodeId) -> Result<VertexSet> {
        self.node(node)?;
        let mut out = Vec::new();
        let mut stack = vec![node];
        while let Some(id) = stack.pop() {
            match self.nodes[id] {
                Node::Leaf { vertex } => out.push(vertex),
                Node::Internal { left, right, .. } => {
                    stack.push(left);
                    stack.push(right);
                }
            }
        }
        Ok(VertexSet::from(out))
    }

    /// Twin set of the graph defined by the subtree at `node`.
    pub fn twin_set(&self, node: NodeId) -> Result<VertexSet> {
        self.node(node)?;
        let mut out = Vec::new();
        let mut stack = vec![node];
        while let Some(id) = stack.pop() {
            match self.nodes[id] {
                Node::Leaf { vertex } => out.push(vertex),
                Node::Internal {
                    op: Op::Attach,
                    left,
                    ..
                } => stack.push(left),
                Node::Internal { left, right, .. } => {
                    stack.push(left);
                    stack.push(right);
                }
            }
        }
        Ok(VertexSet::from(out))
    }

    /// Builds the graph of the whole tree.
    pub fn expand(&self) -> Result<Expansion> {
        self.validate().map_err(Error::Structure)?;
        self.expand_unchecked(self.root)
    }

    /// Builds the graph of the subtree rooted at `node`, relabelled to local ids.
    pub fn expand_node(&self, node: NodeId) -> Result<Expansion> {
        self.validate().map_err(Error::Structure)?;
        self.node(node)?;
        self.expand_unchecked(node)
    }

    fn expand_unchecked(&self, start: NodeId) -> Result<Expansion> {
        let order = self.post_order_from(start);
        let vertices = self.leaves_below(start)?.into_vec();
        let bound = vertices.last().map_or(0, |&v| v + 1);
        let mut local = vec![usize::MAX; bound];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }

        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
        let mut twin: Vec<Vec<usize>> = vec![Vec::new(); self.nodes.len()];
        for id in order {
            match self.nodes[id] {
                Node::Leaf { vertex } => twin[id] = vec![local[vertex]],
                Node::Internal { op, left, right } => {
                    let ts_l = std::mem::take(&mut twin[left]);
                    let ts_r = std::mem::take(&mut twin[right]);
                    if op.joins() {
                        for &u in &ts_l {
                            for &v in &ts_r {
                                adj[u].push(v);
                                adj[v].push(u);
                            }
                        }
                    }
                    twin[id] = if op == Op::Attach {
                        ts_l
                    } else {
                        let mut merged = ts_l;
                        merged.extend(ts_r);
                        merged
                    };
                }
            }
            assert!(!twin[id].is_empty(), "empty twin set at node {id}");
        }

        let twin_set = VertexSet::from(std::mem::take(&mut twin[start]));
        Ok(Expansion {
            graph: Graph::from_raw_adjacency(adj),
            twin_set,
            vertices,
        })
    }

    /// Re-lays the arena out in post-order from the root, dropping unreachable nodes.
    pub fn canonicalize(&self) -> DecompTree {
        let order = self.post_order();
        let mut new_id = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::with_capacity(order.len());
        for id in order {
            new_id[id] = nodes.len();
            nodes.push(match self.nodes[id] {
                Node::Internal { op, left, right } => Node::Internal {
                    op,
                    left: new_id[left],
                    right: new_id[right],
                },
                leaf => leaf,
            });
        }
        let root = nodes.len() - 1;
        // a valid input stays valid, and the new layout is a post-order
        let checked_post_order = self.checked_post_order || self.validate().is_ok();
        DecompTree {
            nodes,
            root,
            checked_post_order,
        }
    }

    /// Serializes to the nested JSON tree format.
    pub fn to_json(&self) -> String {
        let mut out = String::with_capacity(self.nodes.len() * 12);
        enum Step {
            Open(NodeId),
            Text(&'static str),
        }
        let mut stack = vec![Step::Open(self.root)];
        while let Some(step) = stack.pop() {
            match step {
                Step::Text(s) => out.push_str(s),
                Step::Open(id) => match self.nodes[id] {
                    Node::Leaf { vertex } => out.push_str(&format!("{{\"leaf\":{vertex}}}")),
                    Node::Internal { op, left, right } => {
                        out.push_str(&format!("{{\"op\":\"{}\",\"l\":", op.code()));
                        stack.push(Step::Text("}"));
                        stack.push(Step::Open(right));
                        stack.push(Step::Text(",\"r\":"));
                        stack.push(Step::Open(left));
                    }
                },
            }
        }
        out
    }

    /// Parses the nested JSON tree format and validates the result.
    pub fn from_json(text: &str) -> Result<Self> {
        let mut de = serde_json::Deserializer::from_str(text);
        de.disable_recursion_limit();
        let value = Value::deserialize(serde_stacker::Deserializer::new(&mut de))
            .map_err(|e| Error::Parse(format!("tree json: {e}")))?;
        de.end()
            .map_err(|e| Error::Parse(format!("tree json: {e}")))?;

        enum Work {
            Visit(Value),
            Build(Op),
        }
        let mut nodes = Vec::new();
        let mut built: Vec<NodeId> = Vec::new();
        let mut work = vec![Work::Visit(value)];
        let mut op_index = 0;
        let mut missing = Vec::new();
        while let Some(item) = work.pop() {
            match item {
                Work::Build(op) => {
                    let right = built.pop().expect("right child built");
                    let left = built.pop().expect("left child built");
                    built.push(nodes.len());
                    nodes.push(Node::Internal { op, left, right });
                }
                Work::Visit(Value::Object(mut map)) => {
                    if let Some(leaf) = map.get("leaf") {
                        let vertex = leaf
                            .as_u64()
                            .ok_or_else(|| Error::Parse(format!("bad leaf id {leaf}")))?;
                        if map.len() != 1 {
                            return Err(Error::Parse("leaf object has extra keys".into()));
                        }
                        built.push(nodes.len());
                        nodes.push(Node::Leaf {
                            vertex: vertex as usize,
                        });
                        continue;
                    }
                    let op = map
                        .get("op")
                        .and_then(Value::as_str)
                        .and_then(Op::from_code)
                        .ok_or_else(|| {
                            Error::Parse("node needs \"leaf\" or \"op\": T|F|A".into())
                        })?;
                    let l = map.remove("l");
                    let r = map.remove("r");
                    if let Some(key) = map.keys().find(|k| k.as_str() != "op") {
                        return Err(Error::Parse(format!("unexpected key {key:?}")));
                    }
                    match (l, r) {
                        (Some(l), Some(r)) => {
                            work.push(Work::Build(op));
                            work.push(Work::Visit(r));
                            work.push(Work::Visit(l));
                        }
                        (l, r) => {
                            if l.is_none() {
                                missing.push(Violation::MissingChild {
                                    op_index,
                                    side: "l",
                                });
                            }
                            if r.is_none() {
                                missing.push(Violation::MissingChild {
                                    op_index,
                                    side: "r",
                                });
                            }
                        }
                    }
                    op_index += 1;
                }
                Work::Visit(other) => {
                    return Err(Error::Parse(format!(
                        "expected a tree node object, found {other}"
                    )))
                }
            }
        }
        if !missing.is_empty() {
            return Err(Error::Structure(missing));
        }
        let root = built.pop().expect("root built");
        DecompTree::new(nodes, root)
    }
}

/// Incremental construction of a tree in an arena.
#[derive(Debug, Default)]
pub struct TreeBuilder {
    nodes: Vec<Node>,
}

impl TreeBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn leaf(&mut self, vertex: usize) -> NodeId {
        self.nodes.push(Node::Leaf { vertex });
        self.nodes.len() - 1
    }

    pub fn join(&mut self, op: Op, left: NodeId, right: NodeId) -> NodeId {
        self.nodes.push(Node::Internal { op, left, right });
        self.nodes.len() - 1
    }

    pub fn set(&mut self, id: NodeId, node: Node) {
        self.nodes[id] = node;
    }

    pub fn finish(self, root: NodeId) -> Result<DecompTree> {
        DecompTree::new(self.nodes, root)
    }
}

/// Relative probabilities of the three operations in [`generate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OpWeights {
    pub true_twin: f64,
    pub false_twin: f64,
    pub attach: f64,
}

impl Default for OpWeights {
    fn default() -> Self {
        Self {
            true_twin: 1.0,
            false_twin: 1.0,
            attach: 1.0,
        }
    }
}

impl OpWeights {
    pub fn new(true_twin: f64, false_twin: f64, attach: f64) -> Result<Self> {
        let w = Self {
            true_twin,
            false_twin,
            attach,
        };
        let all = [true_twin, false_twin, attach];
        if all.iter().any(|x| !x.is_finite() || *x < 0.0) || all.iter().all(|&x| x == 0.0) {
            return Err(Error::InvalidInput(format!(
                "operation weights must be non-negative and not all zero, got {all:?}"
            )));
        }
        Ok(w)
    }
}

impl std::str::FromStr for OpWeights {
    type Err = Error;

    /// `"t,f,a"`, e.g. `"1,1,1"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad weight {p:?}")))
            })
            .collect::<Result<_>>()?;
        match parts[..] {
            [t, f, a] => OpWeights::new(t, f, a),
            _ => Err(Error::Parse(format!(
                "expected three comma separated weights, got {s:?}"
            ))),
        }
    }
}

/// Random decomposition tree with `n` leaves, deterministic in its arguments.
///
/// Subtrees are merged pairwise from a work list, picking both uniformly. The
/// final merge uses `⊗` or `⊕` so the expansion is connected.
pub fn generate(n: usize, seed: u64, weights: OpWeights) -> Result<DecompTree> {
    if n == 0 {
        return Err(Error::InvalidInput(
            "cannot generate a tree with 0 leaves".into(),
        ));
    }
    let weights = OpWeights::new(weights.true_twin, weights.false_twin, weights.attach)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all_ops = [Op::TrueTwin, Op::FalseTwin, Op::Attach];
    let pick = WeightedIndex::new([weights.true_twin, weights.false_twin, weights.attach])
        .expect("weights checked");
    let root_pick = WeightedIndex::new([weights.true_twin, weights.attach]).ok();

    let mut b = TreeBuilder::new();
    let mut work: Vec<NodeId> = (0..n).map(|v| b.leaf(v)).collect();
    while work.len() > 1 {
        let a = work.swap_remove(rng.gen_range(0..work.len()));
        let c = work.swap_remove(rng.gen_range(0..work.len()));
        let op = if work.is_empty() {
            match &root_pick {
                Some(d) => [Op::TrueTwin, Op::Attach][d.sample(&mut rng)],
                None => Op::TrueTwin,
            }
        } else {
            all_ops[pick.sample(&mut rng)]
        };
        let (left, right) = if op == Op::Attach && rng.gen_bool(0.5) {
            (c, a)
        } else {
            (a, c)
        };
        work.push(b.join(op, left, right));
    }
    let root = work[0];
    Ok(b.finish(root)?.canonicalize())
}
