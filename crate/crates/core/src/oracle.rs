//! Exhaustive reference computations for small graphs.
//!
//! Everything here enumerates vertex subsets as bitmasks and shares nothing
//! with the tree-based solver, so the two can check each other. Size guards
//! are hard errors.

use crate::dp::Gamma;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

pub const GAMMA_P_LIMIT: usize = 20;
pub const DK_LIMIT: usize = 16;
pub const NODE_STATE_LIMIT: usize = 14;
pub const IS_DH_LIMIT: usize = 10;

fn guard(g: &Graph, limit: usize) -> Result<()> {
    if g.n() > limit {
        Err(Error::OracleGuard { n: g.n(), limit })
    } else {
        Ok(())
    }
}

struct Masks {
    n: usize,
    open: Vec<u32>,
    closed: Vec<u32>,
}

impl Masks {
    fn new(g: &Graph) -> Self {
        let open: Vec<u32> = (0..g.n())
            .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
            .collect();
        let closed = open.iter().enumerate().map(|(v, &m)| m | 1 << v).collect();
        Self {
            n: g.n(),
            open,
            closed,
        }
    }

    fn full(&self) -> u32 {
        if self.n == 32 {
            u32::MAX
        } else {
            (1u32 << self.n) - 1
        }
    }

    fn covered(&self, s: u32) -> u32 {
        bits(s).fold(0, |acc, v| acc | self.closed[v])
    }

    /// `pm[s]`: the subgraph induced by `s` has a perfect matching.
    fn matchable(&self) -> Vec<bool> {
        let mut pm = vec![false; 1 << self.n];
        pm[0] = true;
        for s in 1u32..(1 << self.n) {
            let v = s.trailing_zeros() as usize;
            let rest = s & !(1 << v);
            pm[s as usize] = bits(rest & self.open[v]).any(|u| pm[(rest & !(1 << u)) as usize]);
        }
        pm
    }
}

fn bits(mut s: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if s == 0 {
            None
        } else {
            let v = s.trailing_zeros() as usize;
            s &= s - 1;
            Some(v)
        }
    })
}

fn to_mask(s: &VertexSet) -> u32 {
    s.iter().fold(0, |m, v| m | 1 << v)
}

/// Masks on `n` bits grouped by ascending popcount.
fn by_popcount(n: usize) -> Vec<u32> {
    let mut all: Vec<u32> = (0..1u32 << n).collect();
    all.sort_by_key(|m| m.count_ones());
    all
}

/// Minimum paired-dominating set size, by enumeration.
pub fn oracle_gamma_p(g: &Graph) -> Result<Gamma> {
    guard(g, GAMMA_P_LIMIT)?;
    let masks = Masks::new(g);
    let pm = masks.matchable();
    let full = masks.full();
    Ok(by_popcount(g.n())
        .into_iter()
        .find(|&s| pm[s as usize] && masks.covered(s) == full)
        .map_or(Gamma::Infinite, |s| Gamma::Finite(s.count_ones())))
}

/// Everything the enumeration knows about one twin-set graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleNodeReport {
    /// `gamma_k[k]` for `0 <= k <= |ts|`; `None` when no set qualifies.
    pub gamma_k: Vec<Option<usize>>,
    pub min: usize,
    pub alpha: usize,
    pub beta: usize,
    pub mty_ts: bool,
    pub mty_pr: bool,
    pub gamma_p: Gamma,
}

struct Profile {
    masks: Masks,
    pm: Vec<bool>,
    /// Bit `k` of `unpaired[s]`: some `k` twin-set members of `s` can be set
    /// aside so that the rest of `s` is perfectly matchable.
    unpaired: Vec<u32>,
    ts: u32,
    /// Vertices outside the twin set, all of which must be dominated.
    must: u32,
}

impl Profile {
    fn new(g: &Graph, ts: &VertexSet) -> Result<Self> {
        g.check_set(ts)?;
        let masks = Masks::new(g);
        let pm = masks.matchable();
        let ts = to_mask(ts);
        let mut unpaired = vec![0u32; 1 << g.n()];
        for s in 0u32..(1 << g.n()) {
            let mut ks = pm[s as usize] as u32;
            for t in bits(s & ts) {
                ks |= unpaired[(s & !(1 << t)) as usize] << 1;
            }
            unpaired[s as usize] = ks;
        }
        let must = masks.full() & !ts;
        Ok(Self {
            masks,
            pm,
            unpaired,
            ts,
            must,
        })
    }

    fn feasible(&self, s: u32, k: usize) -> bool {
        self.unpaired[s as usize] >> k & 1 == 1 && self.masks.covered(s) & self.must == self.must
    }

    fn gamma_k(&self, k: usize) -> Option<usize> {
        (0u32..1 << self.masks.n)
            .filter(|&s| self.feasible(s, k))
            .map(|s| s.count_ones() as usize)
            .min()
    }
}

/// `γ_k` of `(g, ts)`: the smallest set dominating `V − ts` that is perfectly
/// matchable after setting aside `k` of its twin-set members.
pub fn oracle_dk(g: &Graph, ts: &VertexSet, k: usize) -> Result<Option<usize>> {
    guard(g, DK_LIMIT)?;
    if k > ts.len() {
        return Err(Error::KOutOfRange {
            k,
            ts_size: ts.len(),
        });
    }
    Ok(Profile::new(g, ts)?.gamma_k(k))
}

/// Full `γ_k` table plus the two flags and `γ_p`.
pub fn oracle_node_state(g: &Graph, ts: &VertexSet) -> Result<OracleNodeReport> {
    guard(g, NODE_STATE_LIMIT)?;
    let p = Profile::new(g, ts)?;
    let gamma_k: Vec<Option<usize>> = (0..=ts.len()).map(|k| p.gamma_k(k)).collect();
    let min = gamma_k
        .iter()
        .flatten()
        .copied()
        .min()
        .ok_or_else(|| Error::InvalidInput("no k admits a feasible set".into()))?;
    let alpha = gamma_k.iter().position(|&x| x == Some(min)).unwrap();
    let beta = gamma_k.iter().rposition(|&x| x == Some(min)).unwrap();

    let full = p.masks.full();
    let optimal_zero: Vec<u32> = match gamma_k[0] {
        Some(g0) => (0u32..1 << g.n())
            .filter(|&s| s.count_ones() as usize == g0 && p.feasible(s, 0))
            .collect(),
        None => Vec::new(),
    };
    let mty_ts = optimal_zero.iter().all(|&s| s & p.ts == 0);
    let mty_pr = !optimal_zero
        .iter()
        .any(|&s| p.pm[s as usize] && p.masks.covered(s) == full);

    Ok(OracleNodeReport {
        gamma_k,
        min,
        alpha,
        beta,
        mty_ts,
        mty_pr,
        gamma_p: oracle_gamma_p(g)?,
    })
}

fn bfs(masks: &Masks, within: u32, src: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; masks.n];
    dist[src] = Some(0);
    let mut frontier = 1u32 << src;
    let mut seen = frontier;
    let mut d = 0;
    while frontier != 0 {
        d += 1;
        let next = bits(frontier).fold(0, |acc, v| acc | masks.open[v]) & within & !seen;
        for v in bits(next) {
            dist[v] = Some(d);
        }
        seen |= next;
        frontier = next;
    }
    dist
}

/// Every connected induced subgraph keeps the distances of `g`.
pub fn oracle_is_dh(g: &Graph) -> Result<bool> {
    guard(g, IS_DH_LIMIT)?;
    let masks = Masks::new(g);
    let full = masks.full();
    let base: Vec<Vec<Option<usize>>> = (0..g.n()).map(|v| bfs(&masks, full, v)).collect();
    for s in 1u32..=full {
        if s.count_ones() < 3 {
            continue;
        }
        let first = s.trailing_zeros() as usize;
        let from_first = bfs(&masks, s, first);
        if bits(s).any(|v| from_first[v].is_none()) {
            continue;
        }
        for u in bits(s) {
            let du = bfs(&masks, s, u);
            if bits(s).any(|v| du[v] != base[u][v]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
