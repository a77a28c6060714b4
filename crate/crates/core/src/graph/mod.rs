//! Undirected multigraphs with parallel edges and self-loops.
//!
//! Vertex ids are dense indices into a live-set. Deleting a vertex keeps the
//! id space intact (the slot is marked dead) so that ids stay stable across
//! immersion operations; [`MultiGraph::compact`] relabels when a contiguous
//! range is needed.

mod families;
mod format;
mod immersion;

pub use families::{make_family, random_connected_graph, random_graph, Family, FamilyGraph};
pub use format::{parse_edge_list, parse_graph, parse_graph_json, to_dot, write_edge_list, DotStyle};
pub use immersion::{apply_immersion, edge_sum, EdgeSum, ImmersionOp, ImmersionOptions};

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {0} does not exist")]
    MissingVertex(VertexId),
    #[error("edge {0}-{1} does not exist")]
    MissingEdge(VertexId, VertexId),
    #[error("lift needs three distinct vertices, got ({0}, {1}, {2})")]
    LiftNotDistinct(VertexId, VertexId, VertexId),
    #[error("vertex {0} is not isolated and strict deletion was requested")]
    NotIsolated(VertexId),
    #[error("family {family} needs r >= {min}, got {r}")]
    FamilyParameter { family: Family, min: usize, r: usize },
    #[error("edge-sum vertices have degrees {0} and {1}")]
    DegreeMismatch(usize, usize),
    #[error("edge-sum vertex {0} carries a self-loop")]
    LoopAtSumVertex(VertexId),
    #[error("pairing is not a bijection between the two neighborhoods")]
    BadPairing,
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// An unordered edge, stored with `u <= v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
}

impl Edge {
    pub fn new(a: VertexId, b: VertexId) -> Self {
        if a <= b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    pub fn touches(&self, x: VertexId) -> bool {
        self.u == x || self.v == x
    }

    /// The endpoint opposite to `x`. For a loop this is `x` itself.
    pub fn other(&self, x: VertexId) -> VertexId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MultiGraph {
    live: Vec<bool>,
    edges: Vec<Edge>,
}

impl MultiGraph {
    /// Graph on vertices `0..n` without edges.
    pub fn new(n: usize) -> Self {
        MultiGraph {
            live: vec![true; n],
            edges: Vec::new(),
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId)>) -> Self {
        let mut g = MultiGraph::new(n);
        for (a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    /// Size of the id space, including dead slots.
    pub fn capacity(&self) -> usize {
        self.live.len()
    }

    pub fn add_vertex(&mut self) -> VertexId {
        self.live.push(true);
        self.live.len() - 1
    }

    /// Adds an edge and returns its index.
    ///
    /// Panics if either endpoint is not a live vertex.
    pub fn add_edge(&mut self, a: VertexId, b: VertexId) -> usize {
        assert!(self.has_vertex(a), "vertex {a} does not exist");
        assert!(self.has_vertex(b), "vertex {b} does not exist");
        self.edges.push(Edge::new(a, b));
        self.edges.len() - 1
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.live.get(v).copied().unwrap_or(false)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.live
            .iter()
            .enumerate()
            .filter_map(|(v, &alive)| alive.then_some(v))
    }

    pub fn vertex_count(&self) -> usize {
        self.live.iter().filter(|&&a| a).count()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, idx: usize) -> Edge {
        self.edges[idx]
    }

    /// Degree counting multiplicity; a self-loop contributes two.
    pub fn degree(&self, v: VertexId) -> usize {
        self.edges
            .iter()
            .map(|e| match (e.u == v, e.v == v) {
                (true, true) => 2,
                (true, false) | (false, true) => 1,
                _ => 0,
            })
            .sum()
    }

    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0usize; self.capacity()];
        for e in &self.edges {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        deg.into_iter().max().unwrap_or(0)
    }

    pub fn multiplicity(&self, a: VertexId, b: VertexId) -> usize {
        let key = Edge::new(a, b);
        self.edges.iter().filter(|&&e| e == key).count()
    }

    /// Distinct neighbors of `v`, excluding `v` itself.
    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let set: BTreeSet<VertexId> = self
            .edges
            .iter()
            .filter(|e| e.touches(v) && !e.is_loop())
            .map(|e| e.other(v))
            .collect();
        set.into_iter().collect()
    }

    /// Neighbor slots of `v`: one entry per incident non-loop edge.
    pub fn neighbor_slots(&self, v: VertexId) -> Vec<VertexId> {
        let mut slots: Vec<VertexId> = self
            .edges
            .iter()
            .filter(|e| e.touches(v) && !e.is_loop())
            .map(|e| e.other(v))
            .collect();
        slots.sort_unstable();
        slots
    }

    pub fn incident_edges(&self, v: VertexId) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(i, e)| e.touches(v).then_some(i))
            .collect()
    }

    /// Removes one copy of the edge `a`-`b`. Returns false if there is none.
    pub fn remove_edge(&mut self, a: VertexId, b: VertexId) -> bool {
        let key = Edge::new(a, b);
        match self.edges.iter().position(|&e| e == key) {
            Some(i) => {
                self.edges.remove(i);
                true
            }
            None => false,
        }
    }

    pub fn remove_edge_at(&mut self, idx: usize) -> Edge {
        self.edges.remove(idx)
    }

    /// Deletes `v` together with its incident edges.
    pub fn remove_vertex(&mut self, v: VertexId) {
        if self.has_vertex(v) {
            self.edges.retain(|e| !e.touches(v));
            self.live[v] = false;
        }
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.edges.iter().all(|e| !e.is_loop() && seen.insert(*e))
    }

    /// Connected components over live vertices, each sorted, in order of
    /// their smallest vertex.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut dsu = Dsu::new(self.capacity());
        for e in &self.edges {
            dsu.union(e.u, e.v);
        }
        let mut index = vec![usize::MAX; self.capacity()];
        let mut out: Vec<Vec<VertexId>> = Vec::new();
        for v in self.vertices() {
            let r = dsu.find(v);
            if index[r] == usize::MAX {
                index[r] = out.len();
                out.push(Vec::new());
            }
            out[index[r]].push(v);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Feedback edge number: |E| - |V| + number of components.
    pub fn feedback_edge_number(&self) -> usize {
        self.edge_count() + self.components().len() - self.vertex_count()
    }

    /// Relabels live vertices to `0..vertex_count()` preserving order.
    /// Returns the new graph and the old-to-new map.
    pub fn compact(&self) -> (MultiGraph, Vec<Option<VertexId>>) {
        let mut map = vec![None; self.capacity()];
        let mut next = 0;
        for v in self.vertices() {
            map[v] = Some(next);
            next += 1;
        }
        let mut g = MultiGraph::new(next);
        for e in &self.edges {
            g.edges
                .push(Edge::new(map[e.u].unwrap(), map[e.v].unwrap()));
        }
        (g, map)
    }

    /// Subgraph induced on `keep`; vertex ids are preserved.
    pub fn induced(&self, keep: &[VertexId]) -> MultiGraph {
        let mut live = vec![false; self.capacity()];
        for &v in keep {
            if self.has_vertex(v) {
                live[v] = true;
            }
        }
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|e| live[e.u] && live[e.v])
            .collect();
        MultiGraph { live, edges }
    }

    /// Edges sorted, a canonical multiset view used for equality checks.
    pub fn sorted_edges(&self) -> Vec<Edge> {
        let mut e = self.edges.clone();
        e.sort_unstable();
        e
    }

    /// Same live vertices and same edge multiset.
    pub fn same_as(&self, other: &MultiGraph) -> bool {
        self.vertices().eq(other.vertices()) && self.sorted_edges() == other.sorted_edges()
    }

    /// Canonical form under vertex relabeling, by brute force over all
    /// permutations of the live vertices. Returns the canonical sorted edge
    /// list on `0..n` and the map from compacted ids to canonical ids.
    ///
    /// Only meant for graphs with at most eight vertices.
    pub fn canonical_form(&self) -> (Vec<Edge>, Vec<usize>) {
        let (g, _) = self.compact();
        let n = g.capacity();
        assert!(n <= 8, "canonical form is brute force, got {n} vertices");
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best: Option<(Vec<Edge>, Vec<usize>)> = None;
        loop {
            let mut edges: Vec<Edge> = g
                .edges
                .iter()
                .map(|e| Edge::new(perm[e.u], perm[e.v]))
                .collect();
            edges.sort_unstable();
            if best.as_ref().is_none_or(|(b, _)| edges < *b) {
                best = Some((edges, perm.clone()));
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        best.unwrap_or_default()
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Union-find with path halving and union by size.
#[derive(Debug, Clone)]
pub(crate) struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_counts_loops_twice() {
        let g = MultiGraph::from_edges(2, [(0, 0), (0, 1), (0, 1)]);
        assert_eq!(g.degree(0), 4);
        assert_eq!(g.degree(1), 2);
        assert_eq!(g.max_degree(), 4);
        assert_eq!(g.multiplicity(1, 0), 2);
        assert!(!g.is_simple());
    }

    #[test]
    fn empty_and_single_vertex() {
        assert_eq!(MultiGraph::new(0).max_degree(), 0);
        assert_eq!(MultiGraph::new(1).max_degree(), 0);
        assert_eq!(MultiGraph::new(0).components().len(), 0);
    }

    #[test]
    fn vertex_removal_keeps_ids() {
        let mut g = MultiGraph::from_edges(4, [(0, 1), (1, 2), (2, 3)]);
        g.remove_vertex(1);
        assert_eq!(g.vertices().collect::<Vec<_>>(), vec![0, 2, 3]);
        assert_eq!(g.edge_count(), 1);
        let (c, map) = g.compact();
        assert_eq!(c.capacity(), 3);
        assert_eq!(map, vec![Some(0), None, Some(1), Some(2)]);
        assert_eq!(c.edges(), &[Edge::new(1, 2)]);
    }

    #[test]
    fn fen_of_cycle_and_forest() {
        let c4 = MultiGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(c4.feedback_edge_number(), 1);
        let forest = MultiGraph::from_edges(5, [(0, 1), (2, 3)]);
        assert_eq!(forest.feedback_edge_number(), 0);
        assert_eq!(forest.components().len(), 3);
    }

    #[test]
    fn canonical_form_identifies_isomorphic_paths() {
        let a = MultiGraph::from_edges(3, [(0, 1), (1, 2)]);
        let b = MultiGraph::from_edges(3, [(2, 0), (0, 1)]);
        assert_eq!(a.canonical_form().0, b.canonical_form().0);
        let tri = MultiGraph::from_edges(3, [(2, 0), (0, 1), (1, 2)]);
        assert_ne!(a.canonical_form().0, tri.canonical_form().0);
    }
}
