use serde::{Deserialize, Serialize};

use super::{GraphError, MultiGraph, VertexId};

/// One step of a weak immersion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ImmersionOp {
    DeleteEdge(VertexId, VertexId),
    DeleteVertex(VertexId),
    /// Replace `x-y` and `y-z` by `x-z`.
    Lift {
        x: VertexId,
        y: VertexId,
        z: VertexId,
    },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ImmersionOptions {
    /// Only isolated vertices may be deleted.
    pub strict_vertex_deletion: bool,
    /// Lifting always adds `x-z`, even when an `x-z` edge is already present.
    pub parallel_lift: bool,
}

pub fn apply_immersion(
    g: &MultiGraph,
    op: ImmersionOp,
    opts: ImmersionOptions,
) -> Result<MultiGraph, GraphError> {
    let mut out = g.clone();
    match op {
        ImmersionOp::DeleteEdge(a, b) => {
            require_vertex(g, a)?;
            require_vertex(g, b)?;
            if !out.remove_edge(a, b) {
                return Err(GraphError::MissingEdge(a, b));
            }
        }
        ImmersionOp::DeleteVertex(v) => {
            require_vertex(g, v)?;
            if opts.strict_vertex_deletion && g.degree(v) > 0 {
                return Err(GraphError::NotIsolated(v));
            }
            out.remove_vertex(v);
        }
        ImmersionOp::Lift { x, y, z } => {
            for v in [x, y, z] {
                require_vertex(g, v)?;
            }
            if x == y || y == z || x == z {
                return Err(GraphError::LiftNotDistinct(x, y, z));
            }
            if !out.remove_edge(x, y) {
                return Err(GraphError::MissingEdge(x, y));
            }
            if !out.remove_edge(y, z) {
                return Err(GraphError::MissingEdge(y, z));
            }
            if opts.parallel_lift || out.multiplicity(x, z) == 0 {
                out.add_edge(x, z);
            }
        }
    }
    Ok(out)
}

fn require_vertex(g: &MultiGraph, v: VertexId) -> Result<(), GraphError> {
    if g.has_vertex(v) {
        Ok(())
    } else {
        Err(GraphError::MissingVertex(v))
    }
}

/// Result of a k-edge sum. `left[v]` / `right[v]` map vertices of the two
/// summands to ids in `graph` (`None` for the two glued vertices).
#[derive(Debug, Clone)]
pub struct EdgeSum {
    pub graph: MultiGraph,
    pub left: Vec<Option<VertexId>>,
    pub right: Vec<Option<VertexId>>,
    pub k: usize,
}

/// `g1 (+)_k g2` glued at `v1` and `v2`.
///
/// `pairing` lists `(a, b)` with `a` a neighbor slot of `v1` in `g1` and `b`
/// a neighbor slot of `v2` in `g2`; as multisets the first components must
/// equal the neighbor slots of `v1` and the second those of `v2`, so parallel
/// edges at the glued vertices are paired slot by slot.
pub fn edge_sum(
    g1: &MultiGraph,
    v1: VertexId,
    g2: &MultiGraph,
    v2: VertexId,
    pairing: &[(VertexId, VertexId)],
) -> Result<EdgeSum, GraphError> {
    require_vertex(g1, v1)?;
    require_vertex(g2, v2)?;
    if g1.multiplicity(v1, v1) > 0 {
        return Err(GraphError::LoopAtSumVertex(v1));
    }
    if g2.multiplicity(v2, v2) > 0 {
        return Err(GraphError::LoopAtSumVertex(v2));
    }
    let (d1, d2) = (g1.degree(v1), g2.degree(v2));
    if d1 != d2 {
        return Err(GraphError::DegreeMismatch(d1, d2));
    }
    let mut lhs: Vec<VertexId> = pairing.iter().map(|p| p.0).collect();
    let mut rhs: Vec<VertexId> = pairing.iter().map(|p| p.1).collect();
    lhs.sort_unstable();
    rhs.sort_unstable();
    if lhs != g1.neighbor_slots(v1) || rhs != g2.neighbor_slots(v2) {
        return Err(GraphError::BadPairing);
    }

    let mut left = vec![None; g1.capacity()];
    let mut right = vec![None; g2.capacity()];
    let mut next = 0;
    for v in g1.vertices().filter(|&v| v != v1) {
        left[v] = Some(next);
        next += 1;
    }
    for v in g2.vertices().filter(|&v| v != v2) {
        right[v] = Some(next);
        next += 1;
    }
    let mut graph = MultiGraph::new(next);
    for e in g1.edges().iter().filter(|e| !e.touches(v1)) {
        graph.add_edge(left[e.u].unwrap(), left[e.v].unwrap());
    }
    for e in g2.edges().iter().filter(|e| !e.touches(v2)) {
        graph.add_edge(right[e.u].unwrap(), right[e.v].unwrap());
    }
    for &(a, b) in pairing {
        graph.add_edge(left[a].unwrap(), right[b].unwrap());
    }
    Ok(EdgeSum {
        graph,
        left,
        right,
        k: d1,
    })
}
