use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{GraphError, MultiGraph, VertexId};

/// Extremal graph families used as lower-bound witnesses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `K_{1,r}`, center 0.
    Star,
    /// `r` triangles sharing vertex 0; triangle `i` uses `2i+1, 2i+2`.
    Windmill,
    /// `r x r` grid with every second vertical edge removed in each row.
    Wall,
    /// `2 x r` grid with `r` rungs and a distinguished spanning tree.
    Ladder,
}

impl Family {
    pub fn min_r(self) -> usize {
        match self {
            Family::Star | Family::Windmill => 1,
            Family::Wall | Family::Ladder => 2,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Star => "star",
            Family::Windmill => "windmill",
            Family::Wall => "wall",
            Family::Ladder => "ladder",
        })
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "star" => Ok(Family::Star),
            "windmill" => Ok(Family::Windmill),
            "wall" => Ok(Family::Wall),
            "ladder" => Ok(Family::Ladder),
            other => Err(format!("unknown family `{other}`")),
        }
    }
}

/// A family member plus an optional distinguished spanning tree, given as
/// edge indices into `graph`.
#[derive(Debug, Clone)]
pub struct FamilyGraph {
    pub family: Family,
    pub r: usize,
    pub graph: MultiGraph,
    pub spanning_tree: Option<Vec<usize>>,
}

pub fn make_family(family: Family, r: usize) -> Result<FamilyGraph, GraphError> {
    if r < family.min_r() {
        return Err(GraphError::FamilyParameter {
            family,
            min: family.min_r(),
            r,
        });
    }
    let (graph, spanning_tree) = match family {
        Family::Star => (MultiGraph::from_edges(r + 1, (1..=r).map(|i| (0, i))), None),
        Family::Windmill => {
            let mut g = MultiGraph::new(2 * r + 1);
            for i in 0..r {
                let (a, b) = (2 * i + 1, 2 * i + 2);
                g.add_edge(0, a);
                g.add_edge(0, b);
                g.add_edge(a, b);
            }
            (g, None)
        }
        Family::Wall => (wall(r), None),
        Family::Ladder => {
            let (g, tree) = ladder(r);
            (g, Some(tree))
        }
    };
    Ok(FamilyGraph {
        family,
        r,
        graph,
        spanning_tree,
    })
}

// Vertex (row, col) is `row * r + col`. Rows are joined at column `col` iff
// `row + col` is even, so the first row keeps the verticals at (1-based)
// odd columns and the pattern alternates downwards.
fn wall(r: usize) -> MultiGraph {
    let id = |row: usize, col: usize| -> VertexId { row * r + col };
    let mut g = MultiGraph::new(r * r);
    for row in 0..r {
        for col in 0..r - 1 {
            g.add_edge(id(row, col), id(row, col + 1));
        }
    }
    for row in 0..r - 1 {
        for col in 0..r {
            if (row + col) % 2 == 0 {
                g.add_edge(id(row, col), id(row + 1, col));
            }
        }
    }
    g
}

// Bottom rail `0..r`, top rail `r..2r`, rung `i` joins `i` and `r + i`.
// The distinguished tree is the full top rail plus every rung.
fn ladder(r: usize) -> (MultiGraph, Vec<usize>) {
    let mut g = MultiGraph::new(2 * r);
    let mut tree = Vec::new();
    for i in 0..r - 1 {
        g.add_edge(i, i + 1);
    }
    for i in 0..r - 1 {
        tree.push(g.add_edge(r + i, r + i + 1));
    }
    for i in 0..r {
        tree.push(g.add_edge(i, r + i));
    }
    (g, tree)
}

/// Simple graph on `n` vertices where each pair is an edge with probability `p`.
pub fn random_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> MultiGraph {
    let mut g = MultiGraph::new(n);
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(a, b);
            }
        }
    }
    g
}

/// Connected simple graph on `n` vertices: a random spanning tree plus
/// `extra` further distinct edges (capped by the number of free pairs).
pub fn random_connected_graph<R: Rng>(n: usize, extra: usize, rng: &mut R) -> MultiGraph {
    let mut g = MultiGraph::new(n);
    let mut order: Vec<VertexId> = (0..n).collect();
    order.shuffle(rng);
    for i in 1..n {
        let j = rng.gen_range(0..i);
        g.add_edge(order[i], order[j]);
    }
    let mut free: Vec<(VertexId, VertexId)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|&(a, b)| g.multiplicity(a, b) == 0)
        .collect();
    free.shuffle(rng);
    for &(a, b) in free.iter().take(extra) {
        g.add_edge(a, b);
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_eight() {
        let f = make_family(Family::Star, 8).unwrap();
        assert_eq!(f.graph.vertex_count(), 9);
        assert_eq!(f.graph.edge_count(), 8);
        assert_eq!(f.graph.max_degree(), 8);
        assert_eq!((0..9).filter(|&v| f.graph.degree(v) == 8).count(), 1);
    }

    #[test]
    fn star_one_is_k2() {
        let f = make_family(Family::Star, 1).unwrap();
        assert!(f.graph.same_as(&MultiGraph::from_edges(2, [(0, 1)])));
    }

    #[test]
    fn windmill_counts() {
        let w8 = make_family(Family::Windmill, 8).unwrap().graph;
        assert_eq!((w8.vertex_count(), w8.edge_count()), (17, 24));
        let w4 = make_family(Family::Windmill, 4).unwrap().graph;
        assert_eq!(w4.max_degree(), 8);
    }

    #[test]
    fn wall_six_matches_grid_minus_alternating_verticals() {
        // Independent count: start from the full 6x6 grid (36 vertices,
        // 2*6*5 = 60 edges) and delete, in each of the 5 gaps between rows,
        // every second of its 6 vertical edges (3 per gap).
        let full_grid_edges = 2 * 6 * 5;
        let deleted = 5 * 3;
        let h6 = make_family(Family::Wall, 6).unwrap().graph;
        assert_eq!(h6.vertex_count(), 36);
        assert_eq!(h6.edge_count(), full_grid_edges - deleted);
        assert_eq!(h6.edge_count(), 45);
        assert!(h6.is_connected());
        assert!(h6.max_degree() <= 3);
        // first row keeps verticals at 1-based columns 1, 3, 5
        for col in 0..6 {
            assert_eq!(h6.multiplicity(col, 6 + col), usize::from(col % 2 == 0));
        }
    }

    #[test]
    fn ladder_tree_is_rail_plus_rungs() {
        let f = make_family(Family::Ladder, 9).unwrap();
        assert_eq!(f.graph.vertex_count(), 18);
        assert_eq!(f.graph.edge_count(), 25);
        let tree = f.spanning_tree.unwrap();
        assert_eq!(tree.len(), 17);
    }

    #[test]
    fn rejects_small_parameters() {
        assert!(make_family(Family::Star, 0).is_err());
        assert!(make_family(Family::Wall, 1).is_err());
        assert!(make_family(Family::Ladder, 1).is_err());
        assert!(make_family(Family::Windmill, 1).is_ok());
    }
}
