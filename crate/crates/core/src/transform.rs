//! Normal forms of tree-cut decompositions and the two bridges between
//! decompositions and spanning-forest witnesses.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashSet};

use crate::decomp::{DecompError, DecompView, NodeId, TreeCutDecomposition};
use crate::ecw::{EcwError, SpanningWitness};
use crate::graph::{Dsu, MultiGraph, VertexId};

fn reattach(d: &TreeCutDecomposition, t: NodeId, new_parent: NodeId) -> TreeCutDecomposition {
    let mut parent = d.parents().to_vec();
    parent[t] = Some(new_parent);
    TreeCutDecomposition::new(d.root(), parent, d.bags().to_vec())
}

/// Makes every thin node's neighborhood avoid its siblings' subtrees.
///
/// A greedy pass moves violating thin nodes below offending siblings. When
/// that pass would raise width or slim width, a bounded best-first search
/// over single reattachments looks for a nice decomposition that raises
/// neither; if the budget runs out the greedy result is returned.
pub fn make_nice(
    d: &TreeCutDecomposition,
    g: &MultiGraph,
) -> Result<TreeCutDecomposition, DecompError> {
    let greedy = greedy_nice(d, g)?;
    let before = DecompView::new(d, g)?.report();
    let after = DecompView::new(&greedy, g)?.report();
    if after.width <= before.width && after.slim_width <= before.slim_width {
        return Ok(greedy);
    }
    let limit = (before.width, before.slim_width);
    Ok(search_nice(d, g, limit, NICE_SEARCH_BUDGET)?.unwrap_or(greedy))
}

/// Decompositions evaluated by the fallback search of [`make_nice`].
pub const NICE_SEARCH_BUDGET: usize = 20_000;

/// The violating thin node `t` of least adhesion (breadth-first among ties) is moved below its
/// first offending sibling `s`: to the first node of `T_s` whose result keeps
/// both width and slim width, trying `s` itself, then nodes of `T_s` holding
/// a neighbor of `Y_t`, then the rest of `T_s`. If no position keeps both,
/// the position minimising (width, slim width) is taken. Each move pushes a
/// whole subtree deeper, so the loop ends.
fn greedy_nice(
    d: &TreeCutDecomposition,
    g: &MultiGraph,
) -> Result<TreeCutDecomposition, DecompError> {
    let mut cur = d.clone();
    loop {
        let view = DecompView::new(&cur, g)?;
        // adhesion-one violators first: moving them never grows a 2-center
        let Some((_, t, s)) = view
            .bfs_order()
            .iter()
            .filter_map(|&t| view.violating_sibling(t).map(|s| (view.adhesion(t), t, s)))
            .min_by_key(|&(adh, _, _)| adh)
        else {
            return Ok(cur);
        };
        let base = view.report();
        let nbrs = view.neighborhood(t);
        let subtree: Vec<NodeId> = view
            .bfs_order()
            .iter()
            .copied()
            .filter(|&x| view.in_subtree(x, s))
            .collect();
        let touches = |x: NodeId| cur.bag(x).iter().any(|v| nbrs.contains(v));
        let mut candidates = vec![s];
        candidates.extend(subtree.iter().copied().filter(|&x| x != s && touches(x)));
        candidates.extend(subtree.iter().copied().filter(|&x| x != s && !touches(x)));

        let mut best: Option<((usize, usize), TreeCutDecomposition)> = None;
        for c in candidates {
            let next = reattach(&cur, t, c);
            let r = DecompView::new(&next, g)?.report();
            let key = (r.width, r.slim_width);
            if r.width <= base.width && r.slim_width <= base.slim_width {
                best = Some((key, next));
                break;
            }
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                best = Some((key, next));
            }
        }
        cur = best.expect("s is always a candidate").1;
    }
}

/// Best-first search ordered by the number of violating nodes, never
/// leaving `width ≤ limit.0` and `slim ≤ limit.1`. A step reattaches a
/// subtree, moves one vertex to another bag, or moves it to a new leaf.
fn search_nice(
    d: &TreeCutDecomposition,
    g: &MultiGraph,
    limit: (usize, usize),
    budget: usize,
) -> Result<Option<TreeCutDecomposition>, DecompError> {
    let score = |d: &TreeCutDecomposition| -> Result<Option<(usize, usize, usize)>, DecompError> {
        let view = DecompView::new(d, g)?;
        let r = view.report();
        if r.width > limit.0 || r.slim_width > limit.1 {
            return Ok(None);
        }
        Ok(Some((view.nice_violations().len(), r.slim_width, r.width)))
    };
    let max_nodes = d.node_count() + g.vertex_count();
    let mut seen: HashSet<TreeCutDecomposition> = HashSet::new();
    let mut states = vec![d.clone()];
    let mut heap = BinaryHeap::new();
    seen.insert(d.clone());
    if let Some(key) = score(d)? {
        heap.push(Reverse((key, 0)));
    }
    while let Some(Reverse(((violations, _, _), i))) = heap.pop() {
        let cur = states[i].clone();
        if violations == 0 {
            return Ok(Some(cur.prune_empty_leaves()));
        }
        for next in neighbors(&cur, g, max_nodes)? {
            if !seen.insert(next.clone()) {
                continue;
            }
            if seen.len() > budget {
                return Ok(None);
            }
            if let Some(key) = score(&next)? {
                states.push(next);
                heap.push(Reverse((key, states.len() - 1)));
            }
        }
    }
    Ok(None)
}

fn neighbors(
    d: &TreeCutDecomposition,
    g: &MultiGraph,
    max_nodes: usize,
) -> Result<Vec<TreeCutDecomposition>, DecompError> {
    let view = DecompView::new(d, g)?;
    let m = d.node_count();
    let mut out = Vec::new();
    for x in (0..m).filter(|&x| x != d.root()) {
        for y in 0..m {
            if !view.in_subtree(y, x) && d.parent(x) != Some(y) {
                out.push(reattach(d, x, y));
            }
        }
    }
    for v in g.vertices() {
        let from = view.node_of(v);
        for y in 0..m {
            let mut bags = d.bags().to_vec();
            bags[from].retain(|&u| u != v);
            let mut parent = d.parents().to_vec();
            if y != from {
                bags[y].push(v);
            } else if m < max_nodes && d.bag(from).len() > 1 {
                parent.push(Some(y));
                bags.push(vec![v]);
            } else {
                continue;
            }
            out.push(TreeCutDecomposition::new(d.root(), parent, bags));
        }
    }
    Ok(out)
}

/// Number of decomposable nodes at each depth. Every split strictly
/// decreases this vector lexicographically.
pub fn split_potential(
    d: &TreeCutDecomposition,
    g: &MultiGraph,
) -> Result<Vec<usize>, DecompError> {
    let view = DecompView::new(d, g)?;
    let depths = d.depths();
    let mut counts = vec![0; depths.iter().max().map_or(0, |m| m + 1)];
    for t in view.decomposable_nodes() {
        counts[depths[t]] += 1;
    }
    while counts.last() == Some(&0) {
        counts.pop();
    }
    Ok(counts)
}

/// Splits one decomposable node of minimum depth, if there is one.
pub fn split_once(
    d: &TreeCutDecomposition,
    g: &MultiGraph,
) -> Result<Option<TreeCutDecomposition>, DecompError> {
    let view = DecompView::new(d, g)?;
    let Some((t, e1)) = view
        .bfs_order()
        .iter()
        .find_map(|&t| view.decomposable_edges(t).map(|(e1, _)| (t, e1)))
    else {
        return Ok(None);
    };

    let edge = g.edge(e1);
    let inner = if view.in_y(edge.u, t) { edge.u } else { edge.v };
    let mut dsu = Dsu::new(g.capacity());
    for e in g.edges() {
        if view.in_y(e.u, t) && view.in_y(e.v, t) {
            dsu.union(e.u, e.v);
        }
    }
    let root1 = dsu.find(inner);
    let in_g1: Vec<bool> = (0..g.capacity())
        .map(|v| g.has_vertex(v) && view.in_y(v, t) && dsu.find(v) == root1)
        .collect();

    let n = d.node_count();
    let members: Vec<NodeId> = view
        .bfs_order()
        .iter()
        .copied()
        .filter(|&s| view.in_subtree(s, t))
        .collect();
    let mut copy_of = vec![usize::MAX; n];
    for (i, &s) in members.iter().enumerate() {
        copy_of[s] = n + i;
    }
    let mut parent = d.parents().to_vec();
    let mut bags = d.bags().to_vec();
    for &s in &members {
        let copy_parent = if s == t {
            d.parent(t)
        } else {
            d.parent(s).map(|p| copy_of[p])
        };
        parent.push(copy_parent);
        let (kept, moved): (Vec<VertexId>, Vec<VertexId>) =
            d.bag(s).iter().partition(|&&v| in_g1[v]);
        bags[s] = kept;
        bags.push(moved);
    }
    Ok(Some(
        TreeCutDecomposition::new(d.root(), parent, bags).prune_empty_leaves(),
    ))
}

/// Removes every decomposable node from a nice decomposition by repeatedly
/// splitting the shallowest one into two adhesion-one copies.
pub fn split_decomposables(
    d: &TreeCutDecomposition,
    g: &MultiGraph,
) -> Result<TreeCutDecomposition, DecompError> {
    let bad = DecompView::new(d, g)?.nice_violations();
    if !bad.is_empty() {
        return Err(DecompError::NotNice(bad));
    }
    let mut cur = d.clone();
    while let Some(next) = split_once(&cur, g)? {
        cur = next;
    }
    Ok(cur)
}

/// Nice and without decomposable nodes.
pub fn make_very_nice(
    d: &TreeCutDecomposition,
    g: &MultiGraph,
) -> Result<TreeCutDecomposition, DecompError> {
    let mut cur = make_nice(d, g)?;
    loop {
        let split = split_decomposables(&cur, g)?;
        if split == cur {
            return Ok(cur);
        }
        cur = make_nice(&split, g)?;
    }
}

/// Decomposition over the witness forest: one node per host vertex, bag
/// `{v}` for graph vertices and empty for ghosts. A disconnected forest is
/// hung below an extra empty root.
pub fn witness_to_decomposition(w: &SpanningWitness) -> Result<TreeCutDecomposition, EcwError> {
    w.validate()?;
    let host = w.host();
    let live: Vec<VertexId> = host.vertices().collect();
    let mut index = vec![usize::MAX; host.capacity()];
    for (i, &v) in live.iter().enumerate() {
        index[v] = i;
    }
    let mut adj = vec![Vec::new(); host.capacity()];
    for &i in w.forest() {
        let e = host.edge(i);
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    let mut parent = vec![None; live.len()];
    let mut roots = Vec::new();
    let mut seen = vec![false; host.capacity()];
    for &r in &live {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        roots.push(index[r]);
        let mut stack = vec![r];
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[index[y]] = Some(index[x]);
                    stack.push(y);
                }
            }
        }
    }
    let mut bags: Vec<Vec<VertexId>> = live
        .iter()
        .map(|&v| if w.is_ghost_vertex(v) { vec![] } else { vec![v] })
        .collect();
    let root = match roots[..] {
        [r] => r,
        _ => {
            let extra = live.len();
            for &r in &roots {
                parent[r] = Some(extra);
            }
            parent.push(None);
            bags.push(vec![]);
            extra
        }
    };
    Ok(TreeCutDecomposition::new(root, parent, bags))
}

/// Supergraph witness of bounded edge-cut width built from a decomposition.
///
/// The decomposition is first made nice. Each empty bag gets a ghost vertex,
/// each bag is spanned by a star on its smallest vertex, and each node is
/// joined to its parent by an edge: the unique crossing edge when the node
/// has adhesion one into its parent's bag, otherwise the first graph edge
/// between the two bags or a new ghost edge. Existing graph edges are reused
/// wherever they fit.
pub fn decomposition_to_witness(
    g: &MultiGraph,
    d: &TreeCutDecomposition,
) -> Result<SpanningWitness, DecompError> {
    let nice = make_nice(d, g)?;
    let view = DecompView::new(&nice, g)?;
    let mut host = g.clone();
    let mut ghost_vertex = vec![false; host.capacity()];
    let mut ghost_edge = vec![false; host.edge_count()];
    let mut tree = Vec::new();

    let mut rep: Vec<Vec<VertexId>> = Vec::with_capacity(nice.node_count());
    for t in 0..nice.node_count() {
        if nice.bag(t).is_empty() {
            let v = host.add_vertex();
            ghost_vertex.push(true);
            rep.push(vec![v]);
        } else {
            rep.push(nice.bag(t).to_vec());
        }
    }

    // Every pair of vertex groups joined here is distinct, so an existing
    // edge is never picked twice.
    let mut connect = |a: &[VertexId], b: &[VertexId]| {
        let found = g.edges().iter().position(|e| {
            (a.contains(&e.u) && b.contains(&e.v)) || (a.contains(&e.v) && b.contains(&e.u))
        });
        found.unwrap_or_else(|| {
            ghost_edge.push(true);
            host.add_edge(a[0], b[0])
        })
    };

    for x in &rep {
        for &v in &x[1..] {
            tree.push(connect(&x[..1], &[v]));
        }
    }
    for t in 0..nice.node_count() {
        let Some(p) = nice.parent(t) else { continue };
        let crossing = view.crossing_edges(t);
        let parent_bag: BTreeSet<VertexId> = nice.bag(p).iter().copied().collect();
        if crossing.len() == 1 && view.neighborhood(t).is_subset(&parent_bag) {
            tree.push(crossing[0]);
        } else {
            tree.push(connect(&rep[t], &rep[p]));
        }
    }
    Ok(SpanningWitness::new(host, ghost_vertex, ghost_edge, tree))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{is_nice, is_very_nice, width_report};
    use crate::ecw::ecw_value;
    use crate::graph::{make_family, Family};

    fn windmill_star(r: usize) -> (MultiGraph, TreeCutDecomposition) {
        let g = make_family(Family::Windmill, r).unwrap().graph;
        let mut parent = vec![None];
        let mut bags = vec![vec![0]];
        for i in 0..r {
            parent.push(Some(0));
            bags.push(vec![2 * i + 1, 2 * i + 2]);
        }
        (g, TreeCutDecomposition::new(0, parent, bags))
    }

    #[test]
    fn nice_input_is_a_fixpoint() {
        let (g, d) = windmill_star(4);
        assert_eq!(make_nice(&d, &g).unwrap(), d);
        assert_eq!(split_decomposables(&d, &g).unwrap(), d);
        assert_eq!(width_report(&d, &g).unwrap().width, 2);
    }

    #[test]
    fn windmill_witness_regression() {
        let (g, d) = windmill_star(4);
        let w = decomposition_to_witness(&g, &d).unwrap();
        w.validate_for(&g).unwrap();
        // slim width 5 allows 3 * 6^2 = 108
        assert_eq!(w.ecw().unwrap(), 5);
        assert!(w.ghost_edges().is_empty());
    }

    #[test]
    fn thin_child_moves_under_sibling() {
        // path 0-1-2 with both 1 and 2 as children of the root {0}
        let g = MultiGraph::from_edges(3, [(0, 1), (1, 2)]);
        let d = TreeCutDecomposition::new(0, vec![None, Some(0), Some(0)], vec![vec![0], vec![1], vec![2]]);
        assert_eq!(is_nice(&d, &g), Err(vec![1, 2]));
        let before = width_report(&d, &g).unwrap();
        let out = make_nice(&d, &g).unwrap();
        assert_eq!(is_nice(&out, &g), Ok(()));
        let after = width_report(&out, &g).unwrap();
        assert!(after.width <= before.width);
        assert!(after.slim_width <= before.slim_width);
        assert_eq!(out.parent(2), Some(1));
    }

    #[test]
    fn two_disjoint_edges_are_split() {
        // root {0, 3}; child {1, 2} hangs off 0 via 0-1 and off 3 via 2-3,
        // but 1 and 2 are not adjacent
        let g = MultiGraph::from_edges(4, [(0, 1), (2, 3), (0, 3)]);
        let d = TreeCutDecomposition::new(0, vec![None, Some(0)], vec![vec![0, 3], vec![1, 2]]);
        assert_eq!(is_very_nice(&d, &g), Err(vec![1]));
        assert_eq!(split_potential(&d, &g).unwrap(), vec![0, 1]);
        let out = split_decomposables(&d, &g).unwrap();
        assert_eq!(is_very_nice(&out, &g), Ok(()));
        assert_eq!(out.node_count(), 3);
        assert_eq!(out.bag(1), &[1]);
        assert_eq!(out.bag(2), &[2]);
        assert_eq!(out.parent(2), Some(0));
        for t in [1, 2] {
            assert_eq!(crate::decomp::adhesion(&out, &g, t), Ok(1));
        }
        assert!(split_potential(&out, &g).unwrap().is_empty());
    }

    #[test]
    fn split_rejects_non_nice_input() {
        let g = MultiGraph::from_edges(3, [(0, 1), (1, 2)]);
        let d = TreeCutDecomposition::new(0, vec![None, Some(0), Some(0)], vec![vec![0], vec![1], vec![2]]);
        assert!(matches!(split_decomposables(&d, &g), Err(DecompError::NotNice(_))));
        assert_eq!(is_very_nice(&make_very_nice(&d, &g).unwrap(), &g), Ok(()));
    }

    #[test]
    fn tree_witness_round_trip() {
        let g = MultiGraph::from_edges(5, [(0, 1), (1, 2), (1, 3), (3, 4)]);
        let w = SpanningWitness::from_graph(&g, vec![0, 1, 2, 3]);
        let d = witness_to_decomposition(&w).unwrap();
        assert_eq!(d.node_count(), 5);
        assert_eq!(width_report(&d, &g).unwrap().width, 1);

        let back = decomposition_to_witness(&g, &d).unwrap();
        assert!(back.ghost_vertices().is_empty());
        assert!(back.ghost_edges().is_empty());
        assert_eq!(back.forest(), &[0, 1, 2, 3]);
        assert_eq!(back.ecw(), Ok(1));
    }

    #[test]
    fn c4_path_witness_gives_width_two() {
        let g = MultiGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)]);
        let w = SpanningWitness::from_graph(&g, vec![0, 1, 2]);
        let d = witness_to_decomposition(&w).unwrap();
        assert!(width_report(&d, &g).unwrap().width <= 2);
    }

    #[test]
    fn ladder_witness_decomposition() {
        let f = make_family(Family::Ladder, 9).unwrap();
        let w = SpanningWitness::from_graph(&f.graph, f.spanning_tree.unwrap());
        let d = witness_to_decomposition(&w).unwrap();
        assert!(width_report(&d, &f.graph).unwrap().width <= 3);
    }

    #[test]
    fn disconnected_witness_gets_an_extra_root() {
        let g = MultiGraph::from_edges(4, [(0, 1), (2, 3)]);
        let w = SpanningWitness::from_graph(&g, vec![0, 1]);
        let d = witness_to_decomposition(&w).unwrap();
        assert_eq!(d.node_count(), 5);
        assert_eq!(d.root(), 4);
        assert!(d.bag(4).is_empty());
        assert_eq!(width_report(&d, &g).unwrap().width, 1);
    }

    #[test]
    fn windmill_witness_from_star_decomposition() {
        let (g, d) = windmill_star(4);
        let w = decomposition_to_witness(&g, &d).unwrap();
        w.validate_for(&g).unwrap();
        assert!(w.ghost_vertices().is_empty());
        assert!(w.ghost_edges().is_empty());
        assert_eq!(w.ecw(), Ok(5));
        assert!(w.ecw().unwrap() <= 3 * 36);
    }

    #[test]
    fn empty_bags_become_ghost_vertices() {
        // two disjoint edges under an empty root
        let g = MultiGraph::from_edges(4, [(0, 1), (2, 3)]);
        let d = TreeCutDecomposition::new(0, vec![None, Some(0), Some(0)], vec![vec![], vec![0, 1], vec![2, 3]]);
        let w = decomposition_to_witness(&g, &d).unwrap();
        w.validate_for(&g).unwrap();
        assert_eq!(w.ghost_vertices(), vec![4]);
        assert_eq!(w.ghost_edges(), vec![2, 3]);
        assert_eq!(w.host().edge(2), crate::graph::Edge::new(0, 4));
        assert_eq!(ecw_value(w.host(), w.forest()), Ok(1));

        let tri = MultiGraph::from_edges(3, [(0, 1), (1, 2), (0, 2)]);
        let d = TreeCutDecomposition::star_of_singletons(&tri);
        let w = decomposition_to_witness(&tri, &d).unwrap();
        w.validate_for(&tri).unwrap();
        let k = width_report(&d, &tri).unwrap().slim_width;
        assert!(ecw_value(w.host(), w.forest()).unwrap() <= 3 * (k + 1) * (k + 1));
    }
}
