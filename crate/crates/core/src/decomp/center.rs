//! 1-, 2- and 3-centers of a graph relative to a protected vertex set.

use serde::{Deserialize, Serialize};

use crate::graph::{MultiGraph, VertexId};

/// Which vertices outside the protected set are removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CenterLevel {
    /// Delete isolated vertices.
    One,
    /// Exhaustively delete vertices of degree at most one.
    Two,
    /// Exhaustively suppress vertices of degree at most two.
    Three,
}

impl CenterLevel {
    pub const ALL: [CenterLevel; 3] = [CenterLevel::One, CenterLevel::Two, CenterLevel::Three];
}

/// Adjacency-matrix multigraph used for center computations. The diagonal
/// holds loop counts.
#[derive(Debug, Clone)]
pub(crate) struct DenseMulti {
    n: usize,
    adj: Vec<u32>,
    alive: Vec<bool>,
}

impl DenseMulti {
    pub(crate) fn new(n: usize) -> Self {
        DenseMulti {
            n,
            adj: vec![0; n * n],
            alive: vec![true; n],
        }
    }

    pub(crate) fn from_graph(g: &MultiGraph) -> Self {
        let n = g.capacity();
        let mut d = DenseMulti::new(n);
        for v in 0..n {
            d.alive[v] = g.has_vertex(v);
        }
        for e in g.edges() {
            d.add_edge(e.u, e.v);
        }
        d
    }

    pub(crate) fn add_edge(&mut self, a: usize, b: usize) {
        self.adj[a * self.n + b] += 1;
        if a != b {
            self.adj[b * self.n + a] += 1;
        }
    }

    fn degree(&self, v: usize) -> u32 {
        let row = &self.adj[v * self.n..(v + 1) * self.n];
        row.iter().sum::<u32>() + row[v]
    }

    fn remove(&mut self, v: usize) {
        for w in 0..self.n {
            self.adj[v * self.n + w] = 0;
            self.adj[w * self.n + v] = 0;
        }
        self.alive[v] = false;
    }

    pub(crate) fn alive_count(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    /// Applies the center rule in place. `keep[v]` marks protected vertices.
    /// Candidates are scanned in ascending id order until a fixpoint.
    pub(crate) fn reduce(&mut self, keep: &[bool], level: CenterLevel) {
        match level {
            CenterLevel::One => {
                for v in 0..self.n {
                    if self.alive[v] && !keep[v] && self.degree(v) == 0 {
                        self.alive[v] = false;
                    }
                }
            }
            CenterLevel::Two => {
                while let Some(v) =
                    (0..self.n).find(|&v| self.alive[v] && !keep[v] && self.degree(v) <= 1)
                {
                    self.remove(v);
                }
            }
            CenterLevel::Three => {
                while let Some(v) =
                    (0..self.n).find(|&v| self.alive[v] && !keep[v] && self.degree(v) <= 2)
                {
                    self.suppress(v);
                }
            }
        }
    }

    // Deletes v; a degree-2 vertex with two edge ends at u, w (u == w
    // allowed) is replaced by an edge u-w, which is a loop when u == w.
    fn suppress(&mut self, v: usize) {
        let n = self.n;
        let mut ends = Vec::with_capacity(2);
        if self.adj[v * n + v] == 0 {
            for w in 0..n {
                for _ in 0..self.adj[v * n + w] {
                    ends.push(w);
                }
            }
        }
        self.remove(v);
        if let [a, b] = ends[..] {
            self.add_edge(a, b);
        }
    }

    pub(crate) fn into_graph(self) -> MultiGraph {
        let mut g = MultiGraph::new(self.n);
        for a in 0..self.n {
            for b in a..self.n {
                for _ in 0..self.adj[a * self.n + b] {
                    g.add_edge(a, b);
                }
            }
        }
        for v in 0..self.n {
            if !self.alive[v] {
                g.remove_vertex(v);
            }
        }
        g
    }
}

/// The `level`-center of `(h, x)`. Vertex ids are preserved; removed vertices
/// become dead slots.
pub fn center(h: &MultiGraph, x: &[VertexId], level: CenterLevel) -> MultiGraph {
    let mut keep = vec![false; h.capacity()];
    for &v in x {
        if v < keep.len() {
            keep[v] = true;
        }
    }
    let mut d = DenseMulti::from_graph(h);
    d.reduce(&keep, level);
    d.into_graph()
}
