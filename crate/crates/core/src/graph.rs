//! Undirected simple graphs and the domination / matching predicates.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A set of vertex ids kept in ascending order without duplicates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    /// Largest id plus one, or zero for the empty set.
    pub fn bound(&self) -> usize {
        self.0.last().map_or(0, |&v| v + 1)
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut ids: Vec<usize> = iter.into_iter().collect();
        ids.sort_unstable();
        ids.dedup();
        Self(ids)
    }
}

impl From<Vec<usize>> for VertexSet {
    fn from(ids: Vec<usize>) -> Self {
        ids.into_iter().collect()
    }
}

impl<const N: usize> From<[usize; N]> for VertexSet {
    fn from(ids: [usize; N]) -> Self {
        ids.into_iter().collect()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.0 {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Parses a comma separated id list such as `"2,3"`. The empty string is the empty set.
impl FromStr for VertexSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::new());
        }
        s.split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad vertex id {:?}", tok.trim())))
            })
            .collect()
    }
}

/// Undirected simple graph on vertices `0..n` with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    /// Builds a graph from an edge list. Repeated and reversed pairs collapse to one edge.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop at vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        Ok(Self::from_raw_adjacency(adj))
    }

    /// Sorts and dedups the given lists. Callers guarantee symmetry and no self-loops.
    pub(crate) fn from_raw_adjacency(mut adj: Vec<Vec<usize>>) -> Self {
        let mut total = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            total += list.len();
        }
        debug_assert!(total % 2 == 0);
        Self { adj, m: total / 2 }
    }

    pub fn empty(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Subgraph induced by `keep`, relabelled to `0..keep.len()` in ascending id order.
    pub fn induced(&self, keep: &VertexSet) -> Graph {
        let mut local = vec![usize::MAX; self.n()];
        for (i, v) in keep.iter().enumerate() {
            local[v] = i;
        }
        let adj = keep
            .iter()
            .map(|v| {
                self.adj[v]
                    .iter()
                    .filter_map(|&w| (local[w] != usize::MAX).then_some(local[w]))
                    .collect()
            })
            .collect();
        Graph::from_raw_adjacency(adj)
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<VertexSet> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            stack.push(s);
            let mut comp = Vec::new();
            while let Some(u) = stack.pop() {
                comp.push(u);
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            out.push(VertexSet::from(comp));
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components().len() == 1
    }

    pub(crate) fn check_set(&self, s: &VertexSet) -> Result<()> {
        match s.as_slice().last() {
            Some(&v) if v >= self.n() => Err(Error::InvalidInput(format!(
                "vertex {v} out of range for {} vertices",
                self.n()
            ))),
            _ => Ok(()),
        }
    }

    /// True iff every target is in `d` or adjacent to a member of `d`.
    pub fn is_dominating(&self, d: &VertexSet, targets: &VertexSet) -> Result<bool> {
        self.check_set(d)?;
        self.check_set(targets)?;
        Ok(targets
            .iter()
            .all(|t| d.contains(t) || self.adj[t].iter().any(|&w| d.contains(w))))
    }

    /// True iff the subgraph induced by `s` has a perfect matching.
    pub fn has_perfect_matching_induced(&self, s: &VertexSet) -> Result<bool> {
        self.check_set(s)?;
        Ok(self.induced_matching(s).is_some())
    }

    /// A perfect matching of the subgraph induced by `s`, found by backtracking.
    ///
    /// Intended for small sets; the search is exponential in the worst case.
    pub fn induced_matching(&self, s: &VertexSet) -> Option<Vec<(usize, usize)>> {
        if s.len() % 2 == 1 {
            return None;
        }
        let mut matched = vec![false; s.len()];
        let mut pairs = Vec::with_capacity(s.len() / 2);
        self.match_from(s.as_slice(), &mut matched, &mut pairs)
            .then_some(pairs)
    }

    fn match_from(
        &self,
        s: &[usize],
        matched: &mut [bool],
        pairs: &mut Vec<(usize, usize)>,
    ) -> bool {
        let Some(i) = matched.iter().position(|&b| !b) else {
            return true;
        };
        matched[i] = true;
        let u = s[i];
        for j in i + 1..s.len() {
            if matched[j] || !self.has_edge(u, s[j]) {
                continue;
            }
            matched[j] = true;
            pairs.push((u, s[j]));
            if self.match_from(s, matched, pairs) {
                return true;
            }
            pairs.pop();
            matched[j] = false;
        }
        matched[i] = false;
        false
    }

    /// Dominating set of the whole graph whose induced subgraph has a perfect matching.
    pub fn is_paired_dominating(&self, d: &VertexSet) -> Result<bool> {
        Ok(self.paired_domination_failure(d)?.is_none())
    }

    /// Explains why `d` is not paired-dominating, or `None` when it is.
    pub fn paired_domination_failure(&self, d: &VertexSet) -> Result<Option<String>> {
        self.check_set(d)?;
        if d.len() % 2 == 1 {
            return Ok(Some(format!(
                "no perfect matching: set has odd size {}",
                d.len()
            )));
        }
        let all: VertexSet = (0..self.n()).collect();
        if !self.is_dominating(d, &all)? {
            let missed: VertexSet = all
                .iter()
                .filter(|&t| !d.contains(t) && !self.adj[t].iter().any(|&w| d.contains(w)))
                .collect();
            return Ok(Some(format!(
                "not dominating: vertices {missed} are undominated"
            )));
        }
        if !self.has_perfect_matching_induced(d)? {
            return Ok(Some(
                "no perfect matching in the induced subgraph".to_string(),
            ));
        }
        Ok(None)
    }

    /// Parses the text format: a header `n m`, then `m` lines `u v`. `#` lines are comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing header line".into()))?;
        let (n, m) = parse_pair(header)?;
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            edges.push(parse_pair(line)?);
        }
        if edges.len() != m {
            return Err(Error::Parse(format!(
                "header announces {m} edges, found {}",
                edges.len()
            )));
        }
        Self::from_edges(n, &edges)
    }

    /// Writes the text format understood by [`Graph::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.m());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

fn parse_pair(line: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize> {
        let tok = it
            .next()
            .ok_or_else(|| Error::Parse(format!("expected two integers in {line:?}")))?;
        tok.parse()
            .map_err(|_| Error::Parse(format!("bad integer {tok:?} in {line:?}")))
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(Error::Parse(format!("trailing tokens in {line:?}")));
    }
    Ok((a, b))
}
