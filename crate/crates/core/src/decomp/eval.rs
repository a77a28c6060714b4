use std::collections::BTreeSet;

use serde::Serialize;

use super::center::{CenterLevel, DenseMulti};
use super::{validate, DecompError, NodeId, TreeCutDecomposition};
use crate::graph::{Dsu, MultiGraph, VertexId};

/// Where a torso vertex comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum TorsoVertex {
    /// A vertex of the node's own bag.
    Bag(VertexId),
    /// Consolidation of everything outside the node's subtree.
    Parent { members: Vec<VertexId> },
    /// Consolidation of a child's subtree.
    Child { node: NodeId, members: Vec<VertexId> },
}

/// Torso of a node: bag vertices come first (ids `0..bag_len`), then the
/// parent-side vertex if the node is not the root, then one vertex per child.
#[derive(Debug, Clone)]
pub struct Torso {
    pub graph: MultiGraph,
    pub sources: Vec<TorsoVertex>,
    pub bag_len: usize,
}

impl Torso {
    /// Torso ids of the bag vertices.
    pub fn bag(&self) -> Vec<VertexId> {
        (0..self.bag_len).collect()
    }

    pub fn center(&self, level: CenterLevel) -> MultiGraph {
        super::center(&self.graph, &self.bag(), level)
    }

    fn center_sizes(&self) -> (usize, usize, usize) {
        let keep: Vec<bool> = (0..self.graph.capacity()).map(|v| v < self.bag_len).collect();
        let dense = DenseMulti::from_graph(&self.graph);
        let size = |level| {
            let mut d = dense.clone();
            d.reduce(&keep, level);
            d.alive_count()
        };
        (
            size(CenterLevel::Three),
            size(CenterLevel::Two),
            size(CenterLevel::One),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeStats {
    pub node: NodeId,
    pub adhesion: usize,
    /// Size of the 3-center of the torso.
    pub tor: usize,
    /// Size of the 2-center of the torso.
    pub tor2: usize,
    /// Size of the 1-center of the torso.
    pub tor1: usize,
    pub thin: bool,
    pub bag_size: usize,
    pub children_a: Vec<NodeId>,
    pub children_b: Vec<NodeId>,
    pub children_b2: Vec<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WidthReport {
    pub width: usize,
    pub slim_width: usize,
    pub zero_width: usize,
    pub per_node: Vec<NodeStats>,
}

/// A validated decomposition together with the lookup tables the width
/// measures need.
pub struct DecompView<'a> {
    d: &'a TreeCutDecomposition,
    g: &'a MultiGraph,
    children: Vec<Vec<NodeId>>,
    node_of: Vec<Option<NodeId>>,
    tin: Vec<usize>,
    tout: Vec<usize>,
    order: Vec<NodeId>,
}

impl<'a> DecompView<'a> {
    pub fn new(d: &'a TreeCutDecomposition, g: &'a MultiGraph) -> Result<Self, DecompError> {
        validate(d, g).map_err(DecompError::Invalid)?;
        let children = d.children();
        let mut node_of = vec![None; g.capacity()];
        for t in 0..d.node_count() {
            for &v in d.bag(t) {
                node_of[v] = Some(t);
            }
        }
        let n = d.node_count();
        let (mut tin, mut tout) = (vec![0; n], vec![0; n]);
        let mut clock = 0;
        let mut stack = vec![(d.root(), false)];
        while let Some((t, done)) = stack.pop() {
            if done {
                tout[t] = clock;
                continue;
            }
            tin[t] = clock;
            clock += 1;
            stack.push((t, true));
            for &c in children[t].iter().rev() {
                stack.push((c, false));
            }
        }
        let order = d.bfs_order();
        Ok(DecompView {
            d,
            g,
            children,
            node_of,
            tin,
            tout,
            order,
        })
    }

    pub fn decomposition(&self) -> &TreeCutDecomposition {
        self.d
    }

    pub fn graph(&self) -> &MultiGraph {
        self.g
    }

    pub fn children(&self, t: NodeId) -> &[NodeId] {
        &self.children[t]
    }

    pub fn bfs_order(&self) -> &[NodeId] {
        &self.order
    }

    fn check(&self, t: NodeId) -> Result<(), DecompError> {
        if t < self.d.node_count() {
            Ok(())
        } else {
            Err(DecompError::UnknownNode(t))
        }
    }

    /// Is node `x` in the subtree rooted at `t`?
    pub fn in_subtree(&self, x: NodeId, t: NodeId) -> bool {
        self.tin[t] <= self.tin[x] && self.tin[x] < self.tout[t]
    }

    pub fn node_of(&self, v: VertexId) -> NodeId {
        self.node_of[v].expect("validated")
    }

    /// Is vertex `v` in `Y_t`?
    pub fn in_y(&self, v: VertexId, t: NodeId) -> bool {
        self.in_subtree(self.node_of(v), t)
    }

    pub fn y_set(&self, t: NodeId) -> Vec<VertexId> {
        self.g.vertices().filter(|&v| self.in_y(v, t)).collect()
    }

    /// Indices of the edges with exactly one endpoint in `Y_t`.
    pub fn crossing_edges(&self, t: NodeId) -> Vec<usize> {
        if t == self.d.root() {
            return Vec::new();
        }
        self.g
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| self.in_y(e.u, t) != self.in_y(e.v, t))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn adhesion(&self, t: NodeId) -> usize {
        self.crossing_edges(t).len()
    }

    /// `N(Y_t)`: vertices outside `Y_t` adjacent to it.
    pub fn neighborhood(&self, t: NodeId) -> BTreeSet<VertexId> {
        self.crossing_edges(t)
            .into_iter()
            .map(|i| {
                let e = self.g.edge(i);
                if self.in_y(e.u, t) {
                    e.v
                } else {
                    e.u
                }
            })
            .collect()
    }

    pub fn torso(&self, t: NodeId) -> Torso {
        let bag = self.d.bag(t);
        let mut sources: Vec<TorsoVertex> = bag.iter().map(|&v| TorsoVertex::Bag(v)).collect();
        let parent_slot = (t != self.d.root()).then(|| {
            sources.push(TorsoVertex::Parent { members: vec![] });
            sources.len() - 1
        });
        let first_child = sources.len();
        for &c in &self.children[t] {
            sources.push(TorsoVertex::Child {
                node: c,
                members: vec![],
            });
        }

        let mut slot = vec![usize::MAX; self.g.capacity()];
        for v in self.g.vertices() {
            let s = self.node_of(v);
            slot[v] = if s == t {
                bag.binary_search(&v).expect("bag holds v")
            } else if self.in_subtree(s, t) {
                let k = self.children[t]
                    .iter()
                    .position(|&c| self.in_subtree(s, c))
                    .expect("descendant lies below some child");
                first_child + k
            } else {
                parent_slot.expect("non-root")
            };
            match &mut sources[slot[v]] {
                TorsoVertex::Parent { members } | TorsoVertex::Child { members, .. } => {
                    members.push(v)
                }
                TorsoVertex::Bag(_) => {}
            }
        }

        let mut graph = MultiGraph::new(sources.len());
        for e in self.g.edges() {
            let (a, b) = (slot[e.u], slot[e.v]);
            if a == b && a >= bag.len() {
                continue;
            }
            graph.add_edge(a, b);
        }
        Torso {
            graph,
            sources,
            bag_len: bag.len(),
        }
    }

    pub fn node_stats(&self, t: NodeId) -> Result<NodeStats, DecompError> {
        self.check(t)?;
        let adhesion = self.adhesion(t);
        let (tor, tor2, tor1) = self.torso(t).center_sizes();
        let bag: BTreeSet<VertexId> = self.d.bag(t).iter().copied().collect();
        let (mut a, mut b, mut b2) = (Vec::new(), Vec::new(), Vec::new());
        for &c in &self.children[t] {
            let adh = self.adhesion(c);
            if adh <= 2 && self.neighborhood(c).is_subset(&bag) {
                b.push(c);
                if adh == 2 {
                    b2.push(c);
                }
            } else {
                a.push(c);
            }
        }
        Ok(NodeStats {
            node: t,
            adhesion,
            tor,
            tor2,
            tor1,
            thin: adhesion <= 2,
            bag_size: bag.len(),
            children_a: a,
            children_b: b,
            children_b2: b2,
        })
    }

    pub fn report(&self) -> WidthReport {
        let per_node: Vec<NodeStats> = (0..self.d.node_count())
            .map(|t| self.node_stats(t).expect("node in range"))
            .collect();
        let fold = |f: fn(&NodeStats) -> usize| {
            per_node
                .iter()
                .map(|s| s.adhesion.max(f(s)))
                .max()
                .unwrap_or(0)
        };
        WidthReport {
            width: fold(|s| s.tor),
            slim_width: fold(|s| s.tor2),
            zero_width: fold(|s| s.tor1),
            per_node,
        }
    }

    /// First sibling (ascending id) whose subtree meets `N(Y_t)`, for a thin
    /// non-root node `t`.
    pub fn violating_sibling(&self, t: NodeId) -> Option<NodeId> {
        let p = self.d.parent(t)?;
        if self.adhesion(t) > 2 {
            return None;
        }
        let nbrs = self.neighborhood(t);
        self.children[p]
            .iter()
            .copied()
            .filter(|&s| s != t)
            .find(|&s| nbrs.iter().any(|&v| self.in_y(v, s)))
    }

    pub fn nice_violations(&self) -> Vec<NodeId> {
        (0..self.d.node_count())
            .filter(|&t| self.violating_sibling(t).is_some())
            .collect()
    }

    /// The two crossing edges of `t` if `t` is decomposable: `t` is in `B`
    /// of its parent, has adhesion two, and the inner endpoints of the two
    /// crossing edges lie in different components of `G[Y_t]`.
    pub fn decomposable_edges(&self, t: NodeId) -> Option<(usize, usize)> {
        let p = self.d.parent(t)?;
        let crossing = self.crossing_edges(t);
        if crossing.len() != 2 {
            return None;
        }
        let nbrs = self.neighborhood(t);
        if !nbrs.iter().all(|&v| self.node_of(v) == p) {
            return None;
        }
        let inner = |i: usize| {
            let e = self.g.edge(i);
            if self.in_y(e.u, t) {
                e.u
            } else {
                e.v
            }
        };
        let mut dsu = Dsu::new(self.g.capacity());
        for e in self.g.edges() {
            if self.in_y(e.u, t) && self.in_y(e.v, t) {
                dsu.union(e.u, e.v);
            }
        }
        let (x, y) = (inner(crossing[0]), inner(crossing[1]));
        (dsu.find(x) != dsu.find(y)).then_some((crossing[0], crossing[1]))
    }

    pub fn decomposable_nodes(&self) -> Vec<NodeId> {
        (0..self.d.node_count())
            .filter(|&t| self.decomposable_edges(t).is_some())
            .collect()
    }
}

pub fn adhesion(d: &TreeCutDecomposition, g: &MultiGraph, t: NodeId) -> Result<usize, DecompError> {
    let view = DecompView::new(d, g)?;
    view.check(t)?;
    Ok(view.adhesion(t))
}

pub fn torso(d: &TreeCutDecomposition, g: &MultiGraph, t: NodeId) -> Result<Torso, DecompError> {
    let view = DecompView::new(d, g)?;
    view.check(t)?;
    Ok(view.torso(t))
}

pub fn node_stats(
    d: &TreeCutDecomposition,
    g: &MultiGraph,
    t: NodeId,
) -> Result<NodeStats, DecompError> {
    DecompView::new(d, g)?.node_stats(t)
}

pub fn width_report(d: &TreeCutDecomposition, g: &MultiGraph) -> Result<WidthReport, DecompError> {
    Ok(DecompView::new(d, g)?.report())
}

/// `Ok` if every thin node's neighborhood avoids its siblings' subtrees,
/// otherwise the violating nodes.
pub fn is_nice(d: &TreeCutDecomposition, g: &MultiGraph) -> Result<(), Vec<NodeId>> {
    let view = DecompView::new(d, g).map_err(|_| Vec::new())?;
    let bad = view.nice_violations();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(bad)
    }
}

/// Nice and without decomposable nodes; otherwise the offending nodes.
pub fn is_very_nice(d: &TreeCutDecomposition, g: &MultiGraph) -> Result<(), Vec<NodeId>> {
    let view = DecompView::new(d, g).map_err(|_| Vec::new())?;
    let mut bad = view.nice_violations();
    bad.extend(view.decomposable_nodes());
    bad.sort_unstable();
    bad.dedup();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(bad)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_family, Family};

    /// W_4 with root bag {center} and one child per triangle holding its two
    /// outer vertices.
    fn windmill_star() -> (MultiGraph, TreeCutDecomposition) {
        let g = make_family(Family::Windmill, 4).unwrap().graph;
        let mut parent = vec![None];
        let mut bags = vec![vec![0]];
        for i in 0..4 {
            parent.push(Some(0));
            bags.push(vec![2 * i + 1, 2 * i + 2]);
        }
        (g, TreeCutDecomposition::new(0, parent, bags))
    }

    #[test]
    fn adhesion_examples() {
        let k4 = MultiGraph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let d = TreeCutDecomposition::star_of_singletons(&k4);
        assert_eq!(adhesion(&d, &k4, 0), Ok(0));
        for t in 1..=4 {
            assert_eq!(adhesion(&d, &k4, t), Ok(3));
        }
        assert_eq!(adhesion(&d, &k4, 9), Err(DecompError::UnknownNode(9)));

        let (w4, dstar) = windmill_star();
        for t in 1..=4 {
            assert_eq!(adhesion(&dstar, &w4, t), Ok(2));
        }
    }

    #[test]
    fn single_node_torso_is_the_graph() {
        let (w4, _) = windmill_star();
        let d = TreeCutDecomposition::single_node(&w4);
        let t = torso(&d, &w4, 0).unwrap();
        assert!(t.graph.same_as(&w4));
    }

    #[test]
    fn windmill_root_torso() {
        let (w4, d) = windmill_star();
        let t = torso(&d, &w4, 0).unwrap();
        assert_eq!(t.graph.vertex_count(), 5);
        for z in 1..=4 {
            assert_eq!(t.graph.multiplicity(0, z), 2);
        }
        assert_eq!(t.center(CenterLevel::Three).vertex_count(), 1);
        assert_eq!(t.center(CenterLevel::Two).vertex_count(), 5);
        assert_eq!(t.center(CenterLevel::One).vertex_count(), 5);
    }

    #[test]
    fn windmill_leaf_torso() {
        let (w4, d) = windmill_star();
        let t = torso(&d, &w4, 1).unwrap();
        assert_eq!(t.graph.vertex_count(), 3);
        assert_eq!(t.graph.multiplicity(0, 2), 1);
        assert_eq!(t.graph.multiplicity(1, 2), 1);
        assert_eq!(t.graph.multiplicity(0, 1), 1);
        assert_eq!(
            t.sources[2],
            TorsoVertex::Parent {
                members: vec![0, 3, 4, 5, 6, 7, 8]
            }
        );
    }

    #[test]
    fn windmill_node_stats_and_report() {
        let (w4, d) = windmill_star();
        let root = node_stats(&d, &w4, 0).unwrap();
        assert_eq!((root.tor, root.tor2), (1, 5));
        assert_eq!(root.children_b2, vec![1, 2, 3, 4]);
        let r = width_report(&d, &w4).unwrap();
        assert_eq!((r.width, r.slim_width), (2, 5));
        assert_eq!(r.zero_width, 5);
        assert_eq!(is_nice(&d, &w4), Ok(()));
    }

    #[test]
    fn single_vertex_widths_are_one() {
        let g = MultiGraph::new(1);
        let r = width_report(&TreeCutDecomposition::single_node(&g), &g).unwrap();
        assert_eq!((r.width, r.slim_width, r.zero_width), (1, 1, 1));
    }

    #[test]
    fn empty_graph_has_width_zero() {
        let g = MultiGraph::new(0);
        let r = width_report(&TreeCutDecomposition::single_node(&g), &g).unwrap();
        assert_eq!((r.width, r.slim_width, r.zero_width), (0, 0, 0));
    }

    #[test]
    fn star_with_singleton_leaves_has_slim_width_one() {
        let s4 = make_family(Family::Star, 4).unwrap().graph;
        let mut parent = vec![None];
        let mut bags = vec![vec![0]];
        for leaf in 1..=4 {
            parent.push(Some(0));
            bags.push(vec![leaf]);
        }
        let d = TreeCutDecomposition::new(0, parent, bags);
        let r = width_report(&d, &s4).unwrap();
        // leaves have adhesion 1 and vanish from the 2-center of the root torso
        assert_eq!(r.per_node[0].tor2, 1);
        assert_eq!(r.per_node[0].tor1, 5);
        assert_eq!(r.slim_width, 1);
        assert_eq!(r.zero_width, 5);
    }

    #[test]
    fn invalid_decomposition_is_rejected() {
        let g = MultiGraph::from_edges(2, [(0, 1)]);
        let d = TreeCutDecomposition::new(0, vec![None], vec![vec![0]]);
        assert!(matches!(width_report(&d, &g), Err(DecompError::Invalid(_))));
    }

    #[test]
    fn thin_child_touching_sibling_is_not_nice() {
        // path 0-1-2 with empty root, children {0,1} and {2}: the child
        // holding 2 is thin and its neighbor 1 sits in the sibling subtree
        let g = MultiGraph::from_edges(3, [(0, 1), (1, 2)]);
        let d = TreeCutDecomposition::new(0, vec![None, Some(0), Some(0)], vec![vec![], vec![0, 1], vec![2]]);
        assert_eq!(is_nice(&d, &g), Err(vec![1, 2]));
    }

    #[test]
    fn adhesion_two_child_over_two_components_is_decomposable() {
        // root bag {0}; child holds {1, 2}, two separate pendant vertices
        let g = MultiGraph::from_edges(3, [(0, 1), (0, 2)]);
        let d = TreeCutDecomposition::new(0, vec![None, Some(0)], vec![vec![0], vec![1, 2]]);
        assert_eq!(is_nice(&d, &g), Ok(()));
        assert_eq!(is_very_nice(&d, &g), Err(vec![1]));
        // joined by an edge they form one component
        let g2 = MultiGraph::from_edges(3, [(0, 1), (0, 2), (1, 2)]);
        assert_eq!(is_very_nice(&d, &g2), Ok(()));
    }
}
