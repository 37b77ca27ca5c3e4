//! Decomposition trees for arbitrary graphs, by repeatedly pruning a pendant
//! vertex or one vertex of a twin pair.
//!
//! A connected graph is distance-hereditary exactly when such pruning reduces
//! it to a single vertex. The tree is rebuilt by replaying the prunings in
//! reverse: re-adding `u` next to its anchor `v` turns the leaf of `v` into
//! `⊗(v, u)`, `⊙(v, u)` or `⊕(v, u)`.

use crate::dectree::{DecompTree, Node, NodeId, Op, TreeBuilder};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ReductionKind {
    /// `removed` has degree one and `anchor` is its neighbor.
    Pendant,
    /// `N[removed] = N[anchor]`.
    TrueTwin,
    /// `N(removed) = N(anchor)`, the two not adjacent.
    FalseTwin,
}

impl ReductionKind {
    fn op(self) -> Op {
        match self {
            ReductionKind::Pendant => Op::Attach,
            ReductionKind::TrueTwin => Op::TrueTwin,
            ReductionKind::FalseTwin => Op::FalseTwin,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Reduction {
    pub kind: ReductionKind,
    pub removed: usize,
    pub anchor: usize,
}

/// Working copy of a vertex subset of a graph that shrinks one vertex at a time.
struct Pruner {
    adj: Vec<Vec<usize>>,
    alive: Vec<bool>,
    remaining: usize,
}

impl Pruner {
    fn new(g: &Graph, members: &VertexSet) -> Self {
        let mut alive = vec![false; g.n()];
        for v in members.iter() {
            alive[v] = true;
        }
        let adj = (0..g.n())
            .map(|v| {
                if alive[v] {
                    g.neighbors(v)
                        .iter()
                        .copied()
                        .filter(|&w| alive[w])
                        .collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        Self {
            adj,
            alive,
            remaining: members.len(),
        }
    }

    fn closed_twins(&self, u: usize, v: usize) -> bool {
        let a = self.adj[u].iter().filter(|&&w| w != v);
        let b = self.adj[v].iter().filter(|&&w| w != u);
        a.eq(b)
    }

    /// Deterministic choice: smallest removed id, then Pendant < TrueTwin <
    /// FalseTwin, then smallest anchor.
    fn find(&self) -> Option<Reduction> {
        let alive = || (0..self.alive.len()).filter(|&v| self.alive[v]);
        for u in alive() {
            let nu = &self.adj[u];
            let deg = nu.len();
            if deg == 1 {
                return Some(Reduction {
                    kind: ReductionKind::Pendant,
                    removed: u,
                    anchor: nu[0],
                });
            }
            if let Some(&v) = nu
                .iter()
                .find(|&&v| self.adj[v].len() == deg && self.closed_twins(u, v))
            {
                return Some(Reduction {
                    kind: ReductionKind::TrueTwin,
                    removed: u,
                    anchor: v,
                });
            }
            let anchor = if deg == 0 {
                alive().find(|&v| v != u && self.adj[v].is_empty())
            } else {
                // a false twin shares every neighbor, in particular the first one
                self.adj[nu[0]]
                    .iter()
                    .copied()
                    .filter(|&v| v != u && self.adj[v].len() == deg && self.adj[v] == *nu)
                    .min()
            };
            if let Some(anchor) = anchor {
                return Some(Reduction {
                    kind: ReductionKind::FalseTwin,
                    removed: u,
                    anchor,
                });
            }
        }
        None
    }

    fn remove(&mut self, u: usize) {
        for w in std::mem::take(&mut self.adj[u]) {
            let list = &mut self.adj[w];
            if let Ok(i) = list.binary_search(&u) {
                list.remove(i);
            }
        }
        self.alive[u] = false;
        self.remaining -= 1;
    }

    fn survivors(&self) -> VertexSet {
        (0..self.alive.len()).filter(|&v| self.alive[v]).collect()
    }

    /// Prunes down to one vertex. Returns the prunings in order and the survivor.
    fn run(mut self) -> Result<(Vec<Reduction>, usize)> {
        let mut seq = Vec::with_capacity(self.remaining.saturating_sub(1));
        while self.remaining > 1 {
            let r = self.find().ok_or_else(|| Error::NotDistanceHereditary {
                remnant: self.survivors(),
            })?;
            self.remove(r.removed);
            seq.push(r);
        }
        let last = self.survivors().iter().next().expect("one vertex left");
        Ok((seq, last))
    }
}

/// One pruning step of `g`, chosen deterministically, or `None` if none exists.
pub fn find_reduction(g: &Graph) -> Option<Reduction> {
    if g.n() < 2 {
        return None;
    }
    Pruner::new(g, &(0..g.n()).collect()).find()
}

/// Replays `seq` backwards from the leaf of `last`, inside `b`.
fn build_component(
    b: &mut TreeBuilder,
    seq: &[Reduction],
    last: usize,
    leaf_of: &mut [NodeId],
) -> NodeId {
    let top = b.leaf(last);
    leaf_of[last] = top;
    for r in seq.iter().rev() {
        let slot = leaf_of[r.anchor];
        let kept = b.leaf(r.anchor);
        let added = b.leaf(r.removed);
        b.set(
            slot,
            Node::Internal {
                op: r.kind.op(),
                left: kept,
                right: added,
            },
        );
        leaf_of[r.anchor] = kept;
        leaf_of[r.removed] = added;
    }
    top
}

/// A decomposition tree whose expansion is exactly `g`.
///
/// Components are decomposed separately and joined left to right with `⊙`.
pub fn decompose(g: &Graph) -> Result<DecompTree> {
    if g.n() == 0 {
        return Err(Error::InvalidInput("graph has no vertices".into()));
    }
    let mut b = TreeBuilder::new();
    let mut leaf_of = vec![usize::MAX; g.n()];
    let mut root: Option<NodeId> = None;
    for comp in g.components() {
        let (seq, last) = Pruner::new(g, &comp).run()?;
        let sub = build_component(&mut b, &seq, last, &mut leaf_of);
        root = Some(match root {
            None => sub,
            Some(acc) => b.join(Op::FalseTwin, acc, sub),
        });
    }
    let tree = b
        .finish(root.expect("at least one component"))?
        .canonicalize();
    if tree.expand()?.graph != *g {
        return Err(Error::Inconsistent(
            "decomposition tree does not reproduce the input graph".into(),
        ));
    }
    Ok(tree)
}

/// Whether every component of `g` prunes down to a single vertex.
pub fn is_distance_hereditary(g: &Graph) -> bool {
    g.components()
        .iter()
        .all(|comp| Pruner::new(g, comp).run().is_ok())
}
