//! Bottom-up dynamic programming over a decomposition tree.
//!
//! Every node `v` carries a [`NodeState`]. For `0 <= k <= |TS(v)|`, `γ_k(v)` is the
//! smallest `D ⊆ V(v)` that dominates every non-twin-set vertex and becomes
//! perfectly matchable after removing some `k` of its twin-set vertices (the
//! *unpaired* ones). The whole profile `k ↦ γ_k(v)` is a V-shaped curve fixed by
//! three numbers: its minimum `min`, and the first and last `k` attaining it
//! (`alpha`, `beta`); see [`NodeState::eval_gamma_k`]. Two flags describe the
//! optimal `k = 0` sets: `mty_ts` (all of them avoid the twin set) and `mty_pr`
//! (none of them is paired-dominating).

mod witness;

use std::fmt;
use std::ops::Add;

use crate::dectree::{DecompTree, Node, NodeId, Op};
use crate::error::{Error, Result};
use crate::graph::VertexSet;

pub use witness::reconstruct_witness;

/// A natural number or infinity; addition saturates at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gamma {
    Finite(u32),
    Infinite,
}

impl Gamma {
    pub fn finite(self) -> Option<u32> {
        match self {
            Gamma::Finite(x) => Some(x),
            Gamma::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Gamma::Finite(_))
    }
}

impl Add for Gamma {
    type Output = Gamma;

    fn add(self, rhs: Gamma) -> Gamma {
        match (self, rhs) {
            (Gamma::Finite(a), Gamma::Finite(b)) => Gamma::Finite(a + b),
            _ => Gamma::Infinite,
        }
    }
}

impl From<Option<u32>> for Gamma {
    fn from(x: Option<u32>) -> Self {
        x.map_or(Gamma::Infinite, Gamma::Finite)
    }
}

impl fmt::Display for Gamma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gamma::Finite(x) => write!(f, "{x}"),
            Gamma::Infinite => f.write_str("∞"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NodeState {
    pub min: u32,
    pub alpha: u32,
    pub beta: u32,
    pub ts_size: u32,
    pub gamma_p: Gamma,
    pub mty_ts: bool,
    pub mty_pr: bool,
}

/// Which of the three attachment cases applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AttachCase {
    /// Neither the right child's `alpha` exceeds the left `beta`, nor a zero pairing holds.
    C1,
    /// `alpha_r > beta_l`.
    C2,
    /// `(alpha_r = 0 ∧ beta_l = 0) ∨ (alpha_l = 0 ∧ beta_r = 0)`.
    C3,
}

fn zero_pairing(l: &NodeState, r: &NodeState) -> bool {
    (r.alpha == 0 && l.beta == 0) || (l.alpha == 0 && r.beta == 0)
}

fn paired_flag(l: &NodeState, r: &NodeState) -> bool {
    let (pl, pr, tl, tr) = (l.mty_pr, r.mty_pr, l.mty_ts, r.mty_ts);
    (pl || pr) && (tl || tr) && (pl || tl) && (pr || tr)
}

fn parity_gap(a: u32, b: u32) -> u32 {
    a.abs_diff(b) % 2
}

impl NodeState {
    /// State of a single vertex.
    pub fn leaf() -> Self {
        Self {
            min: 0,
            alpha: 0,
            beta: 0,
            ts_size: 1,
            gamma_p: Gamma::Infinite,
            mty_ts: true,
            mty_pr: true,
        }
    }

    /// `γ_k` reconstructed from `(min, alpha, beta)`.
    pub fn eval_gamma_k(&self, k: usize) -> Result<usize> {
        if k > self.ts_size as usize {
            return Err(Error::KOutOfRange {
                k,
                ts_size: self.ts_size as usize,
            });
        }
        Ok(self.gamma_k_unchecked(k))
    }

    pub(crate) fn gamma_k_unchecked(&self, k: usize) -> usize {
        let (min, a, b) = (self.min as usize, self.alpha as usize, self.beta as usize);
        if k <= a {
            min + a - k
        } else if k >= b {
            min + k - b
        } else if (k - a).is_multiple_of(2) {
            min
        } else {
            min + 1
        }
    }

    /// The full profile `γ_0 ..= γ_|TS|`.
    pub fn profile(&self) -> Vec<usize> {
        (0..=self.ts_size as usize)
            .map(|k| self.gamma_k_unchecked(k))
            .collect()
    }

    pub fn gamma_0(&self) -> usize {
        self.gamma_k_unchecked(0)
    }

    fn check(self) -> Result<Self> {
        let bad = |what: &str| Err(Error::Inconsistent(format!("{what} in {self:?}")));
        if !(self.alpha <= self.beta && self.beta <= self.ts_size) {
            return bad("alpha <= beta <= ts_size violated");
        }
        if !(self.beta - self.alpha).is_multiple_of(2) {
            return bad("beta - alpha is odd");
        }
        if let Gamma::Finite(g) = self.gamma_p {
            if g % 2 != 0 {
                return bad("odd gamma_p");
            }
        }
        Ok(self)
    }

    fn with_paired_from_gamma0(mut self) -> Self {
        self.gamma_p = Gamma::Finite(self.gamma_0() as u32 + 2 * self.mty_pr as u32);
        self
    }

    pub fn combine_true_twin(l: &NodeState, r: &NodeState) -> Result<NodeState> {
        let alpha = (l.alpha as i64 - r.beta as i64)
            .max(r.alpha as i64 - l.beta as i64)
            .max(parity_gap(l.alpha, r.alpha) as i64);
        let d2 = zero_pairing(l, r);
        NodeState {
            min: l.min + r.min,
            alpha: alpha as u32,
            beta: l.beta + r.beta,
            ts_size: l.ts_size + r.ts_size,
            gamma_p: Gamma::Infinite,
            mty_pr: d2 && paired_flag(l, r),
            mty_ts: d2 && l.mty_ts && r.mty_ts,
        }
        .with_paired_from_gamma0()
        .check()
    }

    pub fn combine_false_twin(l: &NodeState, r: &NodeState) -> Result<NodeState> {
        NodeState {
            min: l.min + r.min,
            alpha: l.alpha + r.alpha,
            beta: l.beta + r.beta,
            ts_size: l.ts_size + r.ts_size,
            gamma_p: l.gamma_p + r.gamma_p,
            mty_pr: l.mty_pr || r.mty_pr,
            mty_ts: l.mty_ts && r.mty_ts,
        }
        .check()
    }

    pub fn attach_case(l: &NodeState, r: &NodeState) -> AttachCase {
        if r.alpha > l.beta {
            AttachCase::C2
        } else if zero_pairing(l, r) {
            AttachCase::C3
        } else {
            AttachCase::C1
        }
    }

    /// `l` is the child whose twin set survives.
    pub fn combine_attach(l: &NodeState, r: &NodeState) -> Result<NodeState> {
        let base = l.min + r.min;
        let (min, alpha, beta) = match Self::attach_case(l, r) {
            AttachCase::C1 => (
                base,
                (l.alpha as i64 - r.beta as i64).max(parity_gap(l.alpha, r.alpha) as i64) as u32,
                l.beta - r.alpha,
            ),
            AttachCase::C2 => (base + r.alpha - l.beta, 0, 0),
            AttachCase::C3 if r.alpha == 0 && l.beta == 0 => {
                let e = (l.mty_ts && r.mty_pr) as u32;
                (base + e, e, e)
            }
            AttachCase::C3 => (base, 0, l.beta),
        };
        let d3 = zero_pairing(l, r) && !(l.mty_ts && r.mty_pr);
        NodeState {
            min,
            alpha,
            beta,
            ts_size: l.ts_size,
            gamma_p: Gamma::Infinite,
            mty_pr: d3 && paired_flag(l, r),
            mty_ts: d3 && l.mty_ts,
        }
        .with_paired_from_gamma0()
        .check()
    }

    pub fn combine(op: Op, l: &NodeState, r: &NodeState) -> Result<NodeState> {
        match op {
            Op::TrueTwin => Self::combine_true_twin(l, r),
            Op::FalseTwin => Self::combine_false_twin(l, r),
            Op::Attach => Self::combine_attach(l, r),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub gamma_p: Gamma,
    /// Indexed by node id.
    pub states: Vec<NodeState>,
    pub witness: Option<VertexSet>,
}

/// Per-node states in one bottom-up pass.
///
/// Trees already checked and stored in post-order (see
/// [`DecompTree::is_checked_post_order`]) take a single sequential sweep;
/// others are validated and traversed first.
pub fn compute_states(t: &DecompTree) -> Result<Vec<NodeState>> {
    let nodes = t.nodes();
    let mut states = vec![NodeState::leaf(); nodes.len()];
    let mut step = |id: NodeId| -> Result<()> {
        if let Node::Internal { op, left, right } = nodes[id] {
            states[id] = NodeState::combine(op, &states[left], &states[right])?;
        }
        Ok(())
    };
    if t.is_checked_post_order() {
        (0..nodes.len()).try_for_each(&mut step)?;
    } else {
        t.validate().map_err(Error::Structure)?;
        t.post_order().into_iter().try_for_each(&mut step)?;
    }
    Ok(states)
}

/// Count mode: only `γ_p` of the tree's graph.
///
/// Evaluates on a stack of pending subtree states, so memory is proportional
/// to the tree depth rather than its size. Needs the arena in post-order;
/// other layouts go through [`compute_states`].
pub fn gamma_p(t: &DecompTree) -> Result<Gamma> {
    if t.is_checked_post_order() {
        if let Some(g) = gamma_p_by_stack(t, 0..t.len())? {
            return Ok(g);
        }
    } else {
        t.validate().map_err(Error::Structure)?;
        if let Some(g) = gamma_p_by_stack(t, t.post_order())? {
            return Ok(g);
        }
    }
    Ok(compute_states(t)?[t.root()].gamma_p)
}

/// `None` when `order` is not the post-order the stack evaluation relies on.
fn gamma_p_by_stack(
    t: &DecompTree,
    order: impl IntoIterator<Item = NodeId>,
) -> Result<Option<Gamma>> {
    let nodes = t.nodes();
    let mut stack: Vec<(NodeId, NodeState)> = Vec::new();
    for id in order {
        match nodes[id] {
            Node::Leaf { .. } => stack.push((id, NodeState::leaf())),
            Node::Internal { op, left, right } => {
                let (Some((r_id, r)), Some((l_id, l))) = (stack.pop(), stack.pop()) else {
                    return Ok(None);
                };
                if (l_id, r_id) != (left, right) {
                    return Ok(None);
                }
                stack.push((id, NodeState::combine(op, &l, &r)?));
            }
        }
    }
    Ok(match stack.as_slice() {
        [(id, s)] if *id == t.root() => Some(s.gamma_p),
        _ => None,
    })
}

/// `γ_p` of the tree's graph, with a minimum witness when asked and one exists.
pub fn solve(t: &DecompTree, want_witness: bool) -> Result<SolveResult> {
    let states = compute_states(t)?;
    let gamma_p = states[t.root()].gamma_p;
    let witness = if want_witness && gamma_p.is_finite() {
        Some(reconstruct_witness(t, &states)?)
    } else {
        None
    };
    Ok(SolveResult {
        gamma_p,
        states,
        witness,
    })
}

/// State of the node, for callers holding a [`SolveResult`].
pub fn state_of(result: &SolveResult, node: NodeId) -> Result<&NodeState> {
    result.states.get(node).ok_or(Error::UnknownNode(node))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dectree::TreeBuilder;
    use crate::fixtures;
    use proptest::prelude::*;

    fn st(min: u32, alpha: u32, beta: u32, ts: u32, gp: Gamma, t: bool, p: bool) -> NodeState {
        NodeState {
            min,
            alpha,
            beta,
            ts_size: ts,
            gamma_p: gp,
            mty_ts: t,
            mty_pr: p,
        }
    }

    const INF: Gamma = Gamma::Infinite;
    const fn fin(x: u32) -> Gamma {
        Gamma::Finite(x)
    }

    #[test]
    fn leaf_profile() {
        let s = NodeState::leaf();
        assert_eq!(s.gamma_p, INF);
        assert_eq!((s.min, s.alpha, s.beta), (0, 0, 0));
        assert_eq!(s.eval_gamma_k(0).unwrap(), 0);
        assert_eq!(s.eval_gamma_k(1).unwrap(), 1);
        assert!(matches!(
            s.eval_gamma_k(2),
            Err(Error::KOutOfRange { k: 2, ts_size: 1 })
        ));
    }

    #[test]
    fn v_shaped_profile() {
        let s = st(1, 4, 10, 11, INF, false, false);
        assert_eq!(s.eval_gamma_k(0).unwrap(), 5);
        assert_eq!(s.eval_gamma_k(7).unwrap(), 2);
        assert_eq!(s.eval_gamma_k(6).unwrap(), 1);
        assert_eq!(s.eval_gamma_k(11).unwrap(), 2);
        let root = st(1, 1, 1, 5, fin(2), false, false);
        assert_eq!(root.profile(), vec![2, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn true_twin_examples() {
        let leaf = NodeState::leaf();
        assert_eq!(
            NodeState::combine_true_twin(&leaf, &leaf).unwrap(),
            st(0, 0, 0, 2, fin(2), true, true)
        );
        let f23 = NodeState::combine_false_twin(&leaf, &leaf).unwrap();
        let kl = NodeState::combine_true_twin(&leaf, &f23).unwrap();
        assert_eq!(kl, st(0, 0, 0, 3, fin(2), true, true));
        let kr = st(1, 1, 1, 2, fin(2), false, false);
        assert_eq!(
            NodeState::combine_true_twin(&kl, &kr).unwrap(),
            st(1, 1, 1, 5, fin(2), false, false)
        );
    }

    #[test]
    fn false_twin_examples() {
        let leaf = NodeState::leaf();
        assert_eq!(
            NodeState::combine_false_twin(&leaf, &leaf).unwrap(),
            st(0, 0, 0, 2, INF, true, true)
        );
        let k2 = NodeState::combine_true_twin(&leaf, &leaf).unwrap();
        assert_eq!(
            NodeState::combine_false_twin(&k2, &k2).unwrap().gamma_p,
            fin(4)
        );
        assert_eq!(
            NodeState::combine_false_twin(&k2, &leaf).unwrap().gamma_p,
            INF
        );
    }

    #[test]
    fn attach_examples() {
        let leaf = NodeState::leaf();
        let t45 = st(0, 0, 0, 2, fin(2), true, true);
        let f67 = st(0, 0, 0, 2, INF, true, true);
        assert_eq!(NodeState::attach_case(&t45, &f67), AttachCase::C3);
        assert_eq!(
            NodeState::combine_attach(&t45, &f67).unwrap(),
            st(1, 1, 1, 2, fin(2), false, false)
        );
        assert_eq!(
            NodeState::combine_attach(&leaf, &leaf).unwrap(),
            st(1, 1, 1, 1, fin(2), false, false)
        );
        let kl = st(0, 0, 0, 3, fin(2), true, true);
        let kr = st(1, 1, 1, 2, fin(2), false, false);
        assert_eq!(NodeState::attach_case(&kl, &kr), AttachCase::C2);
        assert_eq!(
            NodeState::combine_attach(&kl, &kr).unwrap(),
            st(2, 0, 0, 3, fin(2), false, false)
        );
    }

    #[test]
    fn inconsistent_state_is_reported() {
        // beta - alpha odd cannot arise from valid children
        let bad = st(0, 0, 1, 2, INF, true, true);
        let leaf = NodeState::leaf();
        assert!(matches!(
            NodeState::combine_false_twin(&bad, &leaf),
            Err(Error::Inconsistent(_))
        ));
    }

    #[test]
    fn solve_small_trees() {
        let r = solve(&fixtures::fig1_tree(), false).unwrap();
        assert_eq!(r.gamma_p, fin(2));
        assert_eq!(
            r.states[fixtures::fig1_tree().root()].profile(),
            vec![2, 1, 2, 3, 4, 5]
        );
        assert!(r.witness.is_none());

        let r = solve(&DecompTree::single(0), true).unwrap();
        assert_eq!(r.gamma_p, INF);
        assert!(r.witness.is_none());

        // ⊙(K2, single vertex)
        let mut b = TreeBuilder::new();
        let (x, y, z) = (b.leaf(0), b.leaf(1), b.leaf(2));
        let k2 = b.join(Op::TrueTwin, x, y);
        let root = b.join(Op::FalseTwin, k2, z);
        assert_eq!(solve(&b.finish(root).unwrap(), true).unwrap().gamma_p, INF);
    }

    #[test]
    fn fig1_attach_root_reading() {
        let t = fixtures::fig1_tree_with_root(Op::Attach);
        let r = solve(&t, true).unwrap();
        assert_eq!(r.gamma_p, fin(2));
        assert_eq!(r.states[t.root()], st(2, 0, 0, 3, fin(2), false, false));
    }

    #[test]
    fn gamma_arithmetic() {
        assert_eq!(fin(2) + fin(4), fin(6));
        assert_eq!(fin(2) + INF, INF);
        assert!(fin(u32::MAX) < INF);
        assert_eq!(INF.to_string(), "∞");
    }

    fn arb_state() -> impl Strategy<Value = NodeState> {
        (0u32..20, 0u32..12, 0u32..6, 0u32..6).prop_map(|(min, alpha, half_gap, extra)| {
            let beta = alpha + 2 * half_gap;
            st(min, alpha, beta, beta + extra, INF, false, false)
        })
    }

    proptest! {
        #[test]
        fn adjacent_k_differ_by_one(s in arb_state()) {
            let p = s.profile();
            for w in p.windows(2) {
                prop_assert_eq!(w[0].abs_diff(w[1]), 1);
            }
            prop_assert_eq!(p[0], (s.min + s.alpha) as usize);
            prop_assert_eq!(p[s.ts_size as usize], (s.min + s.ts_size - s.beta) as usize);
            prop_assert_eq!(*p.iter().min().unwrap(), s.min as usize);
        }
    }

    #[test]
    fn count_mode_matches_full_states() {
        for seed in 0..40 {
            let t =
                crate::dectree::generate(1 + seed as usize * 5, seed, Default::default()).unwrap();
            assert_eq!(
                gamma_p(&t).unwrap(),
                compute_states(&t).unwrap()[t.root()].gamma_p
            );
        }
        // children before parents but not a post-order: ⊕(⊗(0, 2), 1)
        let nodes = vec![
            Node::Leaf { vertex: 0 },
            Node::Leaf { vertex: 1 },
            Node::Leaf { vertex: 2 },
            Node::Internal {
                op: Op::TrueTwin,
                left: 0,
                right: 2,
            },
            Node::Internal {
                op: Op::Attach,
                left: 3,
                right: 1,
            },
        ];
        let t = DecompTree::new(nodes.clone(), 4).unwrap();
        assert!(t.is_checked_post_order());
        assert_eq!(gamma_p(&t).unwrap(), Gamma::Finite(2));
        let loose = DecompTree::from_parts(nodes, 4);
        assert_eq!(gamma_p(&loose).unwrap(), Gamma::Finite(2));
        assert!(gamma_p(&DecompTree::from_parts(vec![], 0)).is_err());
    }
}
