//! Witness reconstruction.
//!
//! A top-down pass hands every node one request and records how that request
//! splits between the two children; a bottom-up pass then assembles the set.
//! Each split is accepted only if the children's optimal sizes add up to the
//! size the node's own state promises, so the states alone steer the search.
//!
//! A `Profile` request at node `v` asks for a set of size `γ_k(v)` with `k`
//! unpaired twin-set vertices. For `k = 0` it may also ask that the set meets the
//! twin set (`hit`, possible iff `!mty_ts`) or dominates all of `V(v)` (`full`,
//! possible iff `!mty_pr`). A `Paired` request asks for a minimum
//! paired-dominating set of the node's graph.

use crate::dectree::{DecompTree, Node, NodeId, Op};
use crate::error::{Error, Result};
use crate::graph::VertexSet;

use super::NodeState;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Request {
    Profile { k: usize, hit: bool, full: bool },
    Paired,
}

fn plain(k: usize) -> Request {
    Request::Profile {
        k,
        hit: false,
        full: false,
    }
}

#[derive(Clone, Copy, Debug)]
struct Split {
    left: Request,
    right: Request,
    /// Unpaired vertices matched across the two twin sets.
    cross: usize,
    /// Add one fresh twin-set edge on top of an optimal `k = 0` set.
    augment: bool,
}

/// Smallest size a child can deliver for `req`, or `None` when impossible.
fn cost(s: &NodeState, req: Request) -> Option<usize> {
    match req {
        Request::Paired => s.gamma_p.finite().map(|g| g as usize),
        Request::Profile { k, hit, full } => {
            if k > s.ts_size as usize {
                return None;
            }
            if k == 0 && ((hit && s.mty_ts) || (full && s.mty_pr)) {
                return None;
            }
            if k > 0 && full {
                return None;
            }
            Some(s.gamma_k_unchecked(k))
        }
    }
}

fn flagged(hit: bool, full: bool) -> Request {
    Request::Profile { k: 0, hit, full }
}

/// All `(hit, full)` flag combinations for a pair of `k = 0` children.
fn flag_combos() -> impl Iterator<Item = (bool, bool, bool, bool)> {
    (0u8..16).map(|b| (b & 1 != 0, b & 2 != 0, b & 4 != 0, b & 8 != 0))
}

fn choose(
    op: Op,
    state: &NodeState,
    ls: &NodeState,
    rs: &NodeState,
    req: Request,
) -> Option<Split> {
    let fits = |left: Request, right: Request, target: usize| -> bool {
        matches!((cost(ls, left), cost(rs, right)), (Some(a), Some(b)) if a + b == target)
    };
    let (ts_l, ts_r) = (ls.ts_size as usize, rs.ts_size as usize);

    let (k, hit, full, augment) = match (req, op) {
        (Request::Paired, Op::FalseTwin) => {
            let target = state.gamma_p.finite()? as usize;
            return fits(Request::Paired, Request::Paired, target).then_some(Split {
                left: Request::Paired,
                right: Request::Paired,
                cross: 0,
                augment: false,
            });
        }
        (Request::Paired, _) if !state.mty_pr => (0, false, true, false),
        (Request::Paired, _) => (0, false, false, true),
        (Request::Profile { k, hit, full }, _) => (k, hit, full, false),
    };
    if cost(state, flagged(hit, full)).is_none() && k == 0 {
        return None;
    }
    let target = state.gamma_k_unchecked(k);
    let split = |left, right, cross| Split {
        left,
        right,
        cross,
        augment,
    };

    match op {
        Op::FalseTwin => {
            if k == 0 {
                for (hl, fl, hr, fr) in flag_combos() {
                    let ok = (!full || (fl && fr)) && (!hit || hl || hr);
                    if ok && fits(flagged(hl, fl), flagged(hr, fr), target) {
                        return Some(split(flagged(hl, fl), flagged(hr, fr), 0));
                    }
                }
                return None;
            }
            (k.saturating_sub(ts_r)..=k.min(ts_l))
                .find(|&kl| fits(plain(kl), plain(k - kl), target))
                .map(|kl| split(plain(kl), plain(k - kl), 0))
        }
        Op::TrueTwin => {
            for kl in 0..=ts_l {
                for kr in 0..=ts_r {
                    if kl + kr < k || (kl + kr - k) % 2 != 0 {
                        continue;
                    }
                    let cross = (kl + kr - k) / 2;
                    if cross > kl.min(kr) {
                        continue;
                    }
                    if cross == 0 && k == 0 {
                        for (hl, fl, hr, fr) in flag_combos() {
                            let ok = (!hit || hl || hr) && (!full || ((fl || hr) && (fr || hl)));
                            if ok && fits(flagged(hl, fl), flagged(hr, fr), target) {
                                return Some(split(flagged(hl, fl), flagged(hr, fr), 0));
                            }
                        }
                    } else if fits(plain(kl), plain(kr), target) {
                        return Some(split(plain(kl), plain(kr), cross));
                    }
                }
            }
            None
        }
        Op::Attach => {
            for kr in 0..=ts_r {
                let kl = k + kr;
                if kl > ts_l {
                    break;
                }
                if kr == 0 && k == 0 {
                    for (hl, fl, hr, fr) in flag_combos() {
                        let ok = (fr || hl) && (!hit || hl) && (!full || fl || hr);
                        if ok && fits(flagged(hl, fl), flagged(hr, fr), target) {
                            return Some(split(flagged(hl, fl), flagged(hr, fr), 0));
                        }
                    }
                } else if fits(plain(kl), plain(kr), target) {
                    return Some(split(plain(kl), plain(kr), kr));
                }
            }
            None
        }
    }
}

fn stuck(node: NodeId, req: Request, state: &NodeState) -> Error {
    Error::Inconsistent(format!(
        "no split of node {node} reproduces {req:?} for {state:?}"
    ))
}

/// A minimum paired-dominating set of the tree's graph, steered by `states`.
///
/// Runs in time proportional to the sum over `⊗` and `⊕` nodes of the product
/// of the children's twin-set sizes, quadratic in the worst case.
pub fn reconstruct_witness(t: &DecompTree, states: &[NodeState]) -> Result<VertexSet> {
    t.validate().map_err(Error::Structure)?;
    let nodes = t.nodes();
    if states.len() != nodes.len() {
        return Err(Error::InvalidInput(format!(
            "{} states for {} nodes",
            states.len(),
            nodes.len()
        )));
    }
    let root = t.root();
    let gamma_p = states[root].gamma_p.finite().ok_or(Error::NoWitness)?;

    let mut requests: Vec<Option<Request>> = vec![None; nodes.len()];
    let mut splits: Vec<Option<Split>> = vec![None; nodes.len()];
    requests[root] = Some(Request::Paired);
    let mut stack = vec![root];
    while let Some(id) = stack.pop() {
        let req = requests[id].expect("request assigned by parent");
        match nodes[id] {
            Node::Leaf { .. } => {
                if cost(&states[id], req).is_none() {
                    return Err(stuck(id, req, &states[id]));
                }
            }
            Node::Internal { op, left, right } => {
                let s = choose(op, &states[id], &states[left], &states[right], req)
                    .ok_or_else(|| stuck(id, req, &states[id]))?;
                requests[left] = Some(s.left);
                requests[right] = Some(s.right);
                splits[id] = Some(s);
                stack.push(right);
                stack.push(left);
            }
        }
    }

    let n = t.leaf_count();
    let mut chosen = vec![false; n];
    let mut unpaired: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for id in t.post_order() {
        match nodes[id] {
            Node::Leaf { vertex } => {
                if requests[id] == Some(plain(1)) {
                    chosen[vertex] = true;
                    unpaired[id].push(vertex);
                }
            }
            Node::Internal { left, right, .. } => {
                let s = splits[id].expect("split recorded");
                let mut ul = std::mem::take(&mut unpaired[left]);
                let mut ur = std::mem::take(&mut unpaired[right]);
                if ul.len() < s.cross || ur.len() < s.cross {
                    return Err(Error::Inconsistent(format!(
                        "node {id} cannot cross-match {} vertices",
                        s.cross
                    )));
                }
                // matched pairs need no bookkeeping beyond membership
                ul.drain(..s.cross);
                ur.drain(..s.cross);
                ul.extend(ur);
                ul.sort_unstable();
                unpaired[id] = ul;
                if s.augment {
                    let pick = |side: NodeId| -> Result<usize> {
                        t.twin_set(side)?
                            .iter()
                            .find(|&v| !chosen[v])
                            .ok_or_else(|| {
                                Error::Inconsistent(format!("twin set of {side} saturated"))
                            })
                    };
                    let (x, y) = (pick(left)?, pick(right)?);
                    chosen[x] = true;
                    chosen[y] = true;
                }
            }
        }
    }
    if !unpaired[root].is_empty() {
        return Err(Error::Inconsistent(
            "unpaired vertices left at the root".into(),
        ));
    }

    let witness: VertexSet = (0..n).filter(|&v| chosen[v]).collect();
    if witness.len() != gamma_p as usize {
        return Err(Error::Inconsistent(format!(
            "witness has {} vertices, expected {gamma_p}",
            witness.len()
        )));
    }
    Ok(witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dectree::TreeBuilder;
    use crate::dp::solve;
    use crate::fixtures;

    #[test]
    fn fig1_witness() {
        let t = fixtures::fig1_tree();
        let w = solve(&t, true).unwrap().witness.unwrap();
        assert_eq!(w.len(), 2);
        assert!(fixtures::fig1_graph().is_paired_dominating(&w).unwrap());
    }

    #[test]
    fn k2_witness_is_both_ends() {
        for op in [Op::TrueTwin, Op::Attach] {
            let mut b = TreeBuilder::new();
            let (x, y) = (b.leaf(0), b.leaf(1));
            let r = b.join(op, x, y);
            let t = b.finish(r).unwrap();
            assert_eq!(
                solve(&t, true).unwrap().witness.unwrap(),
                VertexSet::from([0, 1])
            );
        }
    }

    #[test]
    fn infinite_gamma_has_no_witness() {
        let t = DecompTree::single(0);
        let states = crate::dp::compute_states(&t).unwrap();
        assert!(matches!(
            reconstruct_witness(&t, &states),
            Err(Error::NoWitness)
        ));
    }
}
