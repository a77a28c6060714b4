//! Edge-cut width: local feedback edge sets over a spanning forest, exact
//! minimisation over all maximal spanning forests, and super edge-cut width
//! witnesses on supergraphs.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decomp::{DecompError, TreeCutDecomposition};
use crate::graph::{Dsu, Edge, MultiGraph, VertexId};
use crate::oracle::{self, OracleOptions, WidthVariant};
use crate::transform;

pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EcwError {
    #[error("forest edge index {0} out of range")]
    EdgeOutOfRange(usize),
    #[error("forest edge {0} listed twice")]
    DuplicateEdge(usize),
    #[error("forest edge {0} closes a cycle")]
    Cycle(usize),
    #[error("forest has {found} edges, a maximal spanning forest needs {needed}")]
    NotMaximal { found: usize, needed: usize },
    #[error("vertex {0} is not in the host graph")]
    MissingVertex(VertexId),
    #[error("witness host minus ghosts is not the given graph")]
    BaseMismatch,
    #[error("edge {0} touches a ghost vertex but is not marked ghost")]
    GhostInconsistent(usize),
    #[error("more than {0} spanning forests; raise the enumeration budget")]
    Budget(u64),
    #[error("malformed witness JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Decomp(#[from] DecompError),
}

/// Rooted view of a maximal spanning forest.
struct ForestIndex {
    parent: Vec<Option<VertexId>>,
    depth: Vec<usize>,
    in_forest: Vec<bool>,
}

impl ForestIndex {
    fn new(h: &MultiGraph, forest: &[usize]) -> Result<Self, EcwError> {
        let mut in_forest = vec![false; h.edge_count()];
        let mut dsu = Dsu::new(h.capacity());
        let mut adj = vec![Vec::new(); h.capacity()];
        for &i in forest {
            if i >= h.edge_count() {
                return Err(EcwError::EdgeOutOfRange(i));
            }
            if in_forest[i] {
                return Err(EcwError::DuplicateEdge(i));
            }
            in_forest[i] = true;
            let e = h.edge(i);
            if !dsu.union(e.u, e.v) {
                return Err(EcwError::Cycle(i));
            }
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        let needed = h.vertex_count() - h.components().len();
        if forest.len() != needed {
            return Err(EcwError::NotMaximal {
                found: forest.len(),
                needed,
            });
        }
        let mut parent = vec![None; h.capacity()];
        let mut depth = vec![0; h.capacity()];
        let mut seen = vec![false; h.capacity()];
        for r in h.vertices() {
            if seen[r] {
                continue;
            }
            seen[r] = true;
            let mut stack = vec![r];
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        parent[y] = Some(x);
                        depth[y] = depth[x] + 1;
                        stack.push(y);
                    }
                }
            }
        }
        Ok(ForestIndex {
            parent,
            depth,
            in_forest,
        })
    }

    /// Vertices on the forest path between `a` and `b`, endpoints included.
    fn path(&self, mut a: VertexId, mut b: VertexId, out: &mut Vec<VertexId>) {
        out.clear();
        while self.depth[a] > self.depth[b] {
            out.push(a);
            a = self.parent[a].expect("deeper vertex has a parent");
        }
        while self.depth[b] > self.depth[a] {
            out.push(b);
            b = self.parent[b].expect("deeper vertex has a parent");
        }
        while a != b {
            out.push(a);
            out.push(b);
            a = self.parent[a].expect("same tree");
            b = self.parent[b].expect("same tree");
        }
        out.push(a);
    }

    fn local_sets(&self, h: &MultiGraph) -> Vec<Vec<usize>> {
        let mut sets = vec![Vec::new(); h.capacity()];
        let mut path = Vec::new();
        for (i, e) in h.edges().iter().enumerate() {
            if self.in_forest[i] {
                continue;
            }
            self.path(e.u, e.v, &mut path);
            for &x in &path {
                sets[x].push(i);
            }
        }
        sets
    }
}

/// `E_loc(v)` for every vertex, indexed by vertex id: the non-forest edges
/// whose forest path contains `v` (endpoints included).
pub fn local_feedback_sets(h: &MultiGraph, forest: &[usize]) -> Result<Vec<Vec<usize>>, EcwError> {
    Ok(ForestIndex::new(h, forest)?.local_sets(h))
}

pub fn local_feedback_set(
    h: &MultiGraph,
    forest: &[usize],
    v: VertexId,
) -> Result<Vec<usize>, EcwError> {
    if !h.has_vertex(v) {
        return Err(EcwError::MissingVertex(v));
    }
    Ok(local_feedback_sets(h, forest)?.swap_remove(v))
}

/// `1 + max_v |E_loc(v)|`.
pub fn ecw_value(h: &MultiGraph, forest: &[usize]) -> Result<usize, EcwError> {
    let sets = local_feedback_sets(h, forest)?;
    Ok(1 + sets.iter().map(Vec::len).max().unwrap_or(0))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EcwOptimum {
    pub value: usize,
    /// Lexicographically smallest optimal forest (sorted edge indices).
    pub forest: Vec<usize>,
    pub forests_examined: u64,
}

/// Exact edge-cut width by enumerating every maximal spanning forest.
/// Fails with [`EcwError::Budget`] once more than `budget` forests appear.
pub fn exact_ecw(g: &MultiGraph, budget: u64) -> Result<EcwOptimum, EcwError> {
    let needed = g.vertex_count() - g.components().len();
    let mut search = ForestSearch {
        g,
        needed,
        budget,
        examined: 0,
        chosen: Vec::with_capacity(needed),
        best: None,
    };
    let mut dsu = RollbackDsu::new(g.capacity());
    search.run(0, &mut dsu)?;
    let (value, forest) = search.best.expect("every graph has a maximal spanning forest");
    Ok(EcwOptimum {
        value,
        forest,
        forests_examined: search.examined,
    })
}

struct ForestSearch<'a> {
    g: &'a MultiGraph,
    needed: usize,
    budget: u64,
    examined: u64,
    chosen: Vec<usize>,
    best: Option<(usize, Vec<usize>)>,
}

impl ForestSearch<'_> {
    // Include-first recursion over edges in index order, so forests come out
    // in lexicographic order of their sorted edge lists.
    fn run(&mut self, i: usize, dsu: &mut RollbackDsu) -> Result<(), EcwError> {
        if self.chosen.len() == self.needed {
            self.examined += 1;
            if self.examined > self.budget {
                return Err(EcwError::Budget(self.budget));
            }
            let value = ecw_value(self.g, &self.chosen)?;
            if self.best.as_ref().is_none_or(|(b, _)| value < *b) {
                self.best = Some((value, self.chosen.clone()));
            }
            return Ok(());
        }
        if i == self.g.edge_count() || self.g.edge_count() - i < self.needed - self.chosen.len() {
            return Ok(());
        }
        let e = self.g.edge(i);
        if e.is_loop() || dsu.find(e.u) == dsu.find(e.v) {
            return self.run(i + 1, dsu);
        }
        let mark = dsu.mark();
        dsu.union(e.u, e.v);
        self.chosen.push(i);
        self.run(i + 1, dsu)?;
        self.chosen.pop();
        dsu.rollback(mark);
        if self.still_spannable(i + 1, dsu) {
            self.run(i + 1, dsu)?;
        }
        Ok(())
    }

    // Can the chosen edges plus edges from `from` onwards still reach a
    // maximal spanning forest?
    fn still_spannable(&self, from: usize, dsu: &RollbackDsu) -> bool {
        let mut check = Dsu::new(self.g.capacity());
        for v in self.g.vertices() {
            check.union(v, dsu.find(v));
        }
        let mut merged = self.chosen.len();
        for e in &self.g.edges()[from..] {
            if check.union(e.u, e.v) {
                merged += 1;
            }
        }
        merged >= self.needed
    }
}

/// Union-find without path compression so unions can be undone.
struct RollbackDsu {
    parent: Vec<usize>,
    size: Vec<usize>,
    history: Vec<usize>,
}

impl RollbackDsu {
    fn new(n: usize) -> Self {
        RollbackDsu {
            parent: (0..n).collect(),
            size: vec![1; n],
            history: Vec::new(),
        }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        self.history.push(b);
    }

    fn mark(&self) -> usize {
        self.history.len()
    }

    fn rollback(&mut self, mark: usize) {
        while self.history.len() > mark {
            let b = self.history.pop().unwrap();
            let a = self.parent[b];
            self.size[a] -= self.size[b];
            self.parent[b] = b;
        }
    }
}

/// Any maximal spanning forest, by depth-first search from each vertex in
/// ascending order.
pub fn dfs_spanning_forest(g: &MultiGraph) -> Vec<usize> {
    let mut dsu = Dsu::new(g.capacity());
    let mut forest = Vec::new();
    let mut adj = vec![Vec::new(); g.capacity()];
    for (i, e) in g.edges().iter().enumerate() {
        adj[e.u].push((e.v, i));
        adj[e.v].push((e.u, i));
    }
    let mut seen = vec![false; g.capacity()];
    for r in g.vertices() {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        let mut stack = vec![r];
        while let Some(x) = stack.pop() {
            for &(y, i) in &adj[x] {
                if !seen[y] && dsu.union(x, y) {
                    seen[y] = true;
                    forest.push(i);
                    stack.push(y);
                }
            }
        }
    }
    forest.sort_unstable();
    forest
}

/// A supergraph `host` of some base graph together with a maximal spanning
/// forest of `host`. Ghost vertices and edges are the parts absent from the
/// base graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningWitness {
    host: MultiGraph,
    ghost_vertex: Vec<bool>,
    ghost_edge: Vec<bool>,
    forest: Vec<usize>,
}

impl SpanningWitness {
    pub fn new(
        host: MultiGraph,
        ghost_vertex: Vec<bool>,
        ghost_edge: Vec<bool>,
        mut forest: Vec<usize>,
    ) -> Self {
        assert_eq!(ghost_vertex.len(), host.capacity());
        assert_eq!(ghost_edge.len(), host.edge_count());
        forest.sort_unstable();
        SpanningWitness {
            host,
            ghost_vertex,
            ghost_edge,
            forest,
        }
    }

    /// Witness without ghosts: the graph itself with one of its forests.
    pub fn from_graph(g: &MultiGraph, forest: Vec<usize>) -> Self {
        SpanningWitness::new(
            g.clone(),
            vec![false; g.capacity()],
            vec![false; g.edge_count()],
            forest,
        )
    }

    pub fn host(&self) -> &MultiGraph {
        &self.host
    }

    pub fn forest(&self) -> &[usize] {
        &self.forest
    }

    pub fn is_ghost_vertex(&self, v: VertexId) -> bool {
        self.ghost_vertex.get(v).copied().unwrap_or(false)
    }

    pub fn is_ghost_edge(&self, i: usize) -> bool {
        self.ghost_edge[i]
    }

    pub fn ghost_vertices(&self) -> Vec<VertexId> {
        self.host.vertices().filter(|&v| self.ghost_vertex[v]).collect()
    }

    pub fn ghost_edges(&self) -> Vec<usize> {
        (0..self.host.edge_count()).filter(|&i| self.ghost_edge[i]).collect()
    }

    /// The host with every ghost vertex and ghost edge removed.
    pub fn base_graph(&self) -> MultiGraph {
        let mut g = MultiGraph::new(self.host.capacity());
        for (i, e) in self.host.edges().iter().enumerate() {
            if !self.ghost_edge[i] {
                g.add_edge(e.u, e.v);
            }
        }
        for v in 0..self.host.capacity() {
            if !self.host.has_vertex(v) || self.ghost_vertex[v] {
                g.remove_vertex(v);
            }
        }
        g
    }

    /// Internal consistency: ghost markers agree and the forest is a
    /// maximal spanning forest of the host.
    pub fn validate(&self) -> Result<(), EcwError> {
        for (i, e) in self.host.edges().iter().enumerate() {
            if !self.ghost_edge[i] && (self.ghost_vertex[e.u] || self.ghost_vertex[e.v]) {
                return Err(EcwError::GhostInconsistent(i));
            }
        }
        ForestIndex::new(&self.host, &self.forest).map(|_| ())
    }

    /// [`validate`](Self::validate) plus: the base graph equals `g`.
    pub fn validate_for(&self, g: &MultiGraph) -> Result<(), EcwError> {
        self.validate()?;
        if self.base_graph().same_as(g) {
            Ok(())
        } else {
            Err(EcwError::BaseMismatch)
        }
    }

    pub fn local_feedback_sets(&self) -> Result<Vec<Vec<usize>>, EcwError> {
        local_feedback_sets(&self.host, &self.forest)
    }

    pub fn ecw(&self) -> Result<usize, EcwError> {
        ecw_value(&self.host, &self.forest)
    }

    pub fn to_json(&self) -> String {
        let doc = WitnessJson {
            graph_vertices: self
                .host
                .vertices()
                .filter(|&v| !self.ghost_vertex[v])
                .collect(),
            ghost_vertices: self.ghost_vertices(),
            edges: self
                .host
                .edges()
                .iter()
                .enumerate()
                .map(|(i, e)| EdgeJson {
                    u: e.u,
                    v: e.v,
                    ghost: self.ghost_edge[i],
                })
                .collect(),
            tree_edges: self
                .forest
                .iter()
                .map(|&i| [self.host.edge(i).u, self.host.edge(i).v])
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }

    /// Parses the witness JSON. Tree edges are matched to host edges by
    /// endpoints, preferring non-ghost copies.
    pub fn from_json(text: &str) -> Result<Self, EcwError> {
        let doc: WitnessJson =
            serde_json::from_str(text).map_err(|e| EcwError::Json(e.to_string()))?;
        let cap = doc
            .graph_vertices
            .iter()
            .chain(&doc.ghost_vertices)
            .map(|&v| v + 1)
            .max()
            .unwrap_or(0);
        let mut host = MultiGraph::new(cap);
        let listed: BTreeSet<VertexId> =
            doc.graph_vertices.iter().chain(&doc.ghost_vertices).copied().collect();
        if listed.len() != doc.graph_vertices.len() + doc.ghost_vertices.len() {
            return Err(EcwError::Json("vertex listed twice".into()));
        }
        for v in 0..cap {
            if !listed.contains(&v) {
                host.remove_vertex(v);
            }
        }
        let mut ghost_vertex = vec![false; cap];
        for &v in &doc.ghost_vertices {
            ghost_vertex[v] = true;
        }
        let mut ghost_edge = Vec::with_capacity(doc.edges.len());
        for e in &doc.edges {
            if !host.has_vertex(e.u) || !host.has_vertex(e.v) {
                return Err(EcwError::Json(format!("edge {}-{} uses an unlisted vertex", e.u, e.v)));
            }
            host.add_edge(e.u, e.v);
            ghost_edge.push(e.ghost);
        }
        let mut used = vec![false; host.edge_count()];
        let mut forest = Vec::with_capacity(doc.tree_edges.len());
        for [a, b] in &doc.tree_edges {
            let key = Edge::new(*a, *b);
            let pick = (0..host.edge_count())
                .filter(|&i| !used[i] && host.edge(i) == key)
                .min_by_key(|&i| (ghost_edge[i], i))
                .ok_or_else(|| EcwError::Json(format!("tree edge {a}-{b} is not a host edge")))?;
            used[pick] = true;
            forest.push(pick);
        }
        Ok(SpanningWitness::new(host, ghost_vertex, ghost_edge, forest))
    }
}

#[derive(Serialize, Deserialize)]
struct WitnessJson {
    graph_vertices: Vec<VertexId>,
    ghost_vertices: Vec<VertexId>,
    edges: Vec<EdgeJson>,
    tree_edges: Vec<[VertexId; 2]>,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    u: VertexId,
    v: VertexId,
    ghost: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SecSource {
    /// An optimal spanning forest of the graph itself.
    ExactEcw,
    /// Supergraph built from a slim tree-cut decomposition.
    Decomposition,
    /// Depth-first spanning forest of the graph, used when nothing better fits.
    SpanningForest,
}

#[derive(Debug, Clone)]
pub struct SecBound {
    pub value: usize,
    pub witness: SpanningWitness,
    pub source: SecSource,
}

#[derive(Debug, Clone, Copy)]
pub struct SecOptions {
    pub budget: u64,
    pub oracle: OracleOptions,
}

impl Default for SecOptions {
    fn default() -> Self {
        SecOptions {
            budget: DEFAULT_ENUMERATION_BUDGET,
            oracle: OracleOptions::default(),
        }
    }
}

/// Upper bound on super edge-cut width: the best of an exact edge-cut width
/// forest (when the enumeration fits the budget) and the supergraph witness
/// built from a slim decomposition (the supplied one, or an oracle-optimal
/// one for small graphs). Falls back to a plain spanning forest.
pub fn sec_upper(g: &MultiGraph, decomposition: Option<&TreeCutDecomposition>, opts: &SecOptions) -> SecBound {
    let mut candidates = Vec::new();
    if let Ok(opt) = exact_ecw(g, opts.budget) {
        candidates.push(SecBound {
            value: opt.value,
            witness: SpanningWitness::from_graph(g, opt.forest),
            source: SecSource::ExactEcw,
        });
    }
    let oracle_decomp;
    let decomposition = match decomposition {
        Some(d) => Some(d),
        None => {
            oracle_decomp = oracle::exact_width(g, WidthVariant::Stcw, &opts.oracle)
                .ok()
                .map(|w| w.decomposition);
            oracle_decomp.as_ref()
        }
    };
    if let Some(d) = decomposition {
        if let Ok(w) = transform::decomposition_to_witness(g, d) {
            if let Ok(value) = w.ecw() {
                candidates.push(SecBound {
                    value,
                    witness: w,
                    source: SecSource::Decomposition,
                });
            }
        }
    }
    if candidates.is_empty() {
        let forest = dfs_spanning_forest(g);
        let value = ecw_value(g, &forest).expect("dfs forest is maximal");
        candidates.push(SecBound {
            value,
            witness: SpanningWitness::from_graph(g, forest),
            source: SecSource::SpanningForest,
        });
    }
    candidates
        .into_iter()
        .min_by_key(|c| c.value)
        .expect("at least one candidate")
}
