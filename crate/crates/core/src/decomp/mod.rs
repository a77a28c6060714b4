//! Tree-cut decompositions and their width measures.

mod center;
mod eval;

pub use center::{center, CenterLevel};
pub(crate) use center::DenseMulti;
pub use eval::{
    adhesion, is_nice, is_very_nice, node_stats, torso, width_report, DecompView, NodeStats,
    Torso, TorsoVertex, WidthReport,
};

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{MultiGraph, VertexId};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompError {
    #[error("invalid decomposition: {}", join(.0))]
    Invalid(Vec<Violation>),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("decomposition is not nice at nodes {0:?}")]
    NotNice(Vec<NodeId>),
    #[error("malformed decomposition JSON: {0}")]
    Json(String),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// One violated clause of the decomposition definition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    RootOutOfRange(NodeId),
    RootHasParent,
    ParentOutOfRange { node: NodeId, parent: NodeId },
    MissingParent(NodeId),
    NotATree(NodeId),
    BagsNotDisjoint { vertex: VertexId, first: NodeId, second: NodeId },
    UnionMissesVertex(VertexId),
    UnknownVertex { node: NodeId, vertex: VertexId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RootOutOfRange(r) => write!(f, "root {r} is not a node"),
            Violation::RootHasParent => write!(f, "root has a parent"),
            Violation::ParentOutOfRange { node, parent } => {
                write!(f, "parent {parent} of node {node} is not a node")
            }
            Violation::MissingParent(t) => write!(f, "non-root node {t} has no parent"),
            Violation::NotATree(t) => write!(f, "node {t} does not reach the root"),
            Violation::BagsNotDisjoint {
                vertex,
                first,
                second,
            } => write!(
                f,
                "bags not disjoint: vertex {vertex} in nodes {first} and {second}"
            ),
            Violation::UnionMissesVertex(v) => write!(f, "union ≠ V(G): vertex {v} in no bag"),
            Violation::UnknownVertex { node, vertex } => {
                write!(f, "bag of node {node} holds {vertex}, not a vertex of G")
            }
        }
    }
}

/// A rooted tree whose nodes carry bags. Nodes are `0..node_count()`.
///
/// The structure itself is not checked on construction; [`validate`] reports
/// every violated clause against a concrete graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TreeCutDecomposition {
    root: NodeId,
    parent: Vec<Option<NodeId>>,
    bags: Vec<Vec<VertexId>>,
}

impl TreeCutDecomposition {
    pub fn new(root: NodeId, parent: Vec<Option<NodeId>>, mut bags: Vec<Vec<VertexId>>) -> Self {
        assert_eq!(parent.len(), bags.len(), "one bag per node");
        for b in &mut bags {
            b.sort_unstable();
        }
        TreeCutDecomposition { root, parent, bags }
    }

    /// One node holding every vertex of `g`.
    pub fn single_node(g: &MultiGraph) -> Self {
        TreeCutDecomposition::new(0, vec![None], vec![g.vertices().collect()])
    }

    /// Empty root with one singleton-bag leaf per vertex.
    pub fn star_of_singletons(g: &MultiGraph) -> Self {
        let mut parent = vec![None];
        let mut bags = vec![vec![]];
        for v in g.vertices() {
            parent.push(Some(0));
            bags.push(vec![v]);
        }
        TreeCutDecomposition::new(0, parent, bags)
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    pub fn parent(&self, t: NodeId) -> Option<NodeId> {
        self.parent[t]
    }

    pub fn parents(&self) -> &[Option<NodeId>] {
        &self.parent
    }

    pub fn bag(&self, t: NodeId) -> &[VertexId] {
        &self.bags[t]
    }

    pub fn bags(&self) -> &[Vec<VertexId>] {
        &self.bags
    }

    /// Children lists, each ascending.
    pub fn children(&self) -> Vec<Vec<NodeId>> {
        let mut ch = vec![Vec::new(); self.node_count()];
        for (t, p) in self.parent.iter().enumerate() {
            if let Some(p) = *p {
                if p < ch.len() && t != self.root {
                    ch[p].push(t);
                }
            }
        }
        ch
    }

    /// Nodes in breadth-first order from the root, children ascending.
    /// Assumes a valid tree shape.
    pub fn bfs_order(&self) -> Vec<NodeId> {
        let ch = self.children();
        let mut order = vec![self.root];
        let mut i = 0;
        while i < order.len() {
            order.extend_from_slice(&ch[order[i]]);
            i += 1;
        }
        order
    }

    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![0; self.node_count()];
        for t in self.bfs_order() {
            if let Some(p) = self.parent[t] {
                depth[t] = depth[p] + 1;
            }
        }
        depth
    }

    /// Relabels bag contents through `map`; vertices mapped to `None` are dropped.
    pub fn map_vertices(&self, map: impl Fn(VertexId) -> Option<VertexId>) -> Self {
        let bags = self
            .bags
            .iter()
            .map(|b| b.iter().filter_map(|&v| map(v)).collect())
            .collect();
        TreeCutDecomposition::new(self.root, self.parent.clone(), bags)
    }

    /// Keeps only the nodes marked in `keep` (which must be closed under
    /// taking parents) and renumbers them preserving order.
    pub(crate) fn retain_nodes(&self, keep: &[bool]) -> Self {
        let mut index = vec![usize::MAX; self.node_count()];
        let mut next = 0;
        for t in 0..self.node_count() {
            if keep[t] {
                index[t] = next;
                next += 1;
            }
        }
        let mut parent = Vec::with_capacity(next);
        let mut bags = Vec::with_capacity(next);
        for t in 0..self.node_count() {
            if keep[t] {
                parent.push(self.parent[t].map(|p| index[p]));
                bags.push(self.bags[t].clone());
            }
        }
        TreeCutDecomposition::new(index[self.root], parent, bags)
    }

    /// Removes empty-bag leaves until none is left (the root is kept).
    pub fn prune_empty_leaves(&self) -> Self {
        let n = self.node_count();
        let mut keep = vec![true; n];
        let mut child_count = vec![0usize; n];
        for t in 0..n {
            if let Some(p) = self.parent[t] {
                child_count[p] += 1;
            }
        }
        let mut stack: Vec<NodeId> = (0..n)
            .filter(|&t| t != self.root && child_count[t] == 0 && self.bags[t].is_empty())
            .collect();
        while let Some(t) = stack.pop() {
            keep[t] = false;
            if let Some(p) = self.parent[t] {
                child_count[p] -= 1;
                if p != self.root && child_count[p] == 0 && self.bags[p].is_empty() {
                    stack.push(p);
                }
            }
        }
        self.retain_nodes(&keep)
    }

    pub fn to_json(&self) -> String {
        let doc = DecompJson {
            root: self.root,
            nodes: (0..self.node_count())
                .map(|t| NodeJson {
                    id: t,
                    parent: self.parent[t],
                    bag: self.bags[t].clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }

    /// Parses `{"root": id, "nodes": [{"id", "parent", "bag"}]}`. Node ids may
    /// be any distinct integers; they are renumbered in ascending order.
    pub fn from_json(text: &str) -> Result<Self, DecompError> {
        let doc: DecompJson =
            serde_json::from_str(text).map_err(|e| DecompError::Json(e.to_string()))?;
        let mut ids: Vec<usize> = doc.nodes.iter().map(|n| n.id).collect();
        ids.sort_unstable();
        let index: BTreeMap<usize, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        if index.len() != ids.len() {
            return Err(DecompError::Json("duplicate node id".into()));
        }
        let lookup = |id: usize| {
            index
                .get(&id)
                .copied()
                .ok_or_else(|| DecompError::Json(format!("unknown node id {id}")))
        };
        let mut parent = vec![None; ids.len()];
        let mut bags = vec![Vec::new(); ids.len()];
        for n in &doc.nodes {
            let i = index[&n.id];
            parent[i] = n.parent.map(lookup).transpose()?;
            bags[i] = n.bag.clone();
        }
        Ok(TreeCutDecomposition::new(lookup(doc.root)?, parent, bags))
    }
}

#[derive(Serialize, Deserialize)]
struct DecompJson {
    root: usize,
    nodes: Vec<NodeJson>,
}

#[derive(Serialize, Deserialize)]
struct NodeJson {
    id: usize,
    parent: Option<usize>,
    bag: Vec<VertexId>,
}

/// Checks the rooted-tree shape and that the bags near-partition `V(g)`.
pub fn validate(d: &TreeCutDecomposition, g: &MultiGraph) -> Result<(), Vec<Violation>> {
    let n = d.node_count();
    let mut out = Vec::new();
    if d.root >= n {
        out.push(Violation::RootOutOfRange(d.root));
        return Err(out);
    }
    if d.parent[d.root].is_some() {
        out.push(Violation::RootHasParent);
    }
    let mut shape_ok = true;
    for t in 0..n {
        match d.parent[t] {
            Some(p) if p >= n => {
                out.push(Violation::ParentOutOfRange { node: t, parent: p });
                shape_ok = false;
            }
            None if t != d.root => {
                out.push(Violation::MissingParent(t));
                shape_ok = false;
            }
            _ => {}
        }
    }
    if shape_ok {
        // every node must reach the root within n steps
        for t in 0..n {
            let mut cur = t;
            let mut steps = 0;
            while cur != d.root && steps <= n {
                match d.parent[cur] {
                    Some(p) => cur = p,
                    None => break,
                }
                steps += 1;
            }
            if cur != d.root {
                out.push(Violation::NotATree(t));
            }
        }
    }

    let mut owner: Vec<Option<NodeId>> = vec![None; g.capacity()];
    for (t, bag) in d.bags.iter().enumerate() {
        for &v in bag {
            if !g.has_vertex(v) {
                out.push(Violation::UnknownVertex { node: t, vertex: v });
                continue;
            }
            match owner[v] {
                Some(first) => out.push(Violation::BagsNotDisjoint {
                    vertex: v,
                    first,
                    second: t,
                }),
                None => owner[v] = Some(t),
            }
        }
    }
    for v in g.vertices() {
        if owner[v].is_none() {
            out.push(Violation::UnionMissesVertex(v));
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> MultiGraph {
        MultiGraph::from_edges(3, [(0, 1), (1, 2)])
    }

    #[test]
    fn singleton_path_decomposition_is_valid() {
        let d = TreeCutDecomposition::new(0, vec![None, Some(0), Some(1)], vec![vec![0], vec![1], vec![2]]);
        assert_eq!(validate(&d, &p3()), Ok(()));
    }

    #[test]
    fn overlapping_bags_are_reported() {
        let d = TreeCutDecomposition::new(0, vec![None, Some(0)], vec![vec![0, 1], vec![1, 2]]);
        let err = validate(&d, &p3()).unwrap_err();
        assert_eq!(
            err,
            vec![Violation::BagsNotDisjoint {
                vertex: 1,
                first: 0,
                second: 1
            }]
        );
        assert!(err[0].to_string().contains("bags not disjoint"));
    }

    #[test]
    fn missing_vertex_is_reported() {
        let d = TreeCutDecomposition::new(0, vec![None, Some(0)], vec![vec![0], vec![1]]);
        let err = validate(&d, &p3()).unwrap_err();
        assert_eq!(err, vec![Violation::UnionMissesVertex(2)]);
        assert!(err[0].to_string().contains("union ≠ V(G)"));
    }

    #[test]
    fn bad_shapes_are_reported() {
        let cyc = TreeCutDecomposition::new(0, vec![None, Some(2), Some(1)], vec![vec![0], vec![1], vec![2]]);
        assert!(validate(&cyc, &p3())
            .unwrap_err()
            .contains(&Violation::NotATree(1)));
        let orphan = TreeCutDecomposition::new(0, vec![None, None], vec![vec![0, 1], vec![2]]);
        assert_eq!(validate(&orphan, &p3()), Err(vec![Violation::MissingParent(1)]));
    }

    #[test]
    fn prune_removes_empty_leaf_chains() {
        let d = TreeCutDecomposition::new(
            0,
            vec![None, Some(0), Some(1), Some(0)],
            vec![vec![], vec![], vec![], vec![0]],
        );
        let p = d.prune_empty_leaves();
        assert_eq!(p.node_count(), 2);
        assert_eq!(p.bag(1), &[0]);
    }

    #[test]
    fn json_renumbers_ids() {
        let text = r#"{"root": 10, "nodes": [{"id": 10, "parent": null, "bag": []},
                      {"id": 30, "parent": 10, "bag": [2, 1]}, {"id": 20, "parent": 10, "bag": [0]}]}"#;
        let d = TreeCutDecomposition::from_json(text).unwrap();
        assert_eq!(d.root(), 0);
        assert_eq!(d.bag(2), &[1, 2]);
        assert_eq!(d.parent(1), Some(0));
        let again = TreeCutDecomposition::from_json(&d.to_json()).unwrap();
        assert_eq!(again.to_json(), d.to_json());
    }
}
