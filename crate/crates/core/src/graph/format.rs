//! Text formats: the `n m` edge list, a small JSON graph form, and DOT.

use std::collections::BTreeSet;
use std::fmt::Write;

use serde::Deserialize;

use super::{GraphError, MultiGraph, VertexId};

/// Parses the edge-list format: the first non-comment line holds `n m`,
/// followed by `m` lines `u v` with 0-based ids. Repeated lines are parallel
/// edges and `#` starts a comment.
pub fn parse_edge_list(text: &str) -> Result<MultiGraph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (line, header) = lines.next().ok_or(GraphError::Parse {
        line: 0,
        msg: "missing `n m` header".into(),
    })?;
    let (n, m) = parse_pair(line, header)?;
    let mut g = MultiGraph::new(n);
    for (line, l) in lines.by_ref() {
        let (u, v) = parse_pair(line, l)?;
        if u >= n || v >= n {
            return Err(GraphError::Parse {
                line,
                msg: format!("vertex out of range 0..{n}"),
            });
        }
        g.add_edge(u, v);
    }
    if g.edge_count() != m {
        return Err(GraphError::Parse {
            line: 0,
            msg: format!("header announces {m} edges, found {}", g.edge_count()),
        });
    }
    Ok(g)
}

fn parse_pair(line: usize, l: &str) -> Result<(usize, usize), GraphError> {
    let err = |msg: String| GraphError::Parse { line, msg };
    let mut it = l.split_whitespace();
    let mut next = || -> Result<usize, GraphError> {
        let tok = it.next().ok_or_else(|| err("expected two integers".into()))?;
        tok.parse()
            .map_err(|_| err(format!("`{tok}` is not a non-negative integer")))
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(err("expected exactly two integers".into()));
    }
    Ok((a, b))
}

/// Writes the edge-list format. Dead vertex slots are compacted away.
pub fn write_edge_list(g: &MultiGraph) -> String {
    let (c, _) = g.compact();
    let mut out = format!("{} {}\n", c.vertex_count(), c.edge_count());
    for e in c.edges() {
        let _ = writeln!(out, "{} {}", e.u, e.v);
    }
    out
}

#[derive(Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

/// JSON graph form: `{"n": 4, "edges": [[0,1],[1,2]]}`.
pub fn parse_graph_json(text: &str) -> Result<MultiGraph, GraphError> {
    let parsed: GraphJson = serde_json::from_str(text).map_err(|e| GraphError::Parse {
        line: e.line(),
        msg: e.to_string(),
    })?;
    let mut g = MultiGraph::new(parsed.n);
    for [u, v] in parsed.edges {
        if u >= parsed.n || v >= parsed.n {
            return Err(GraphError::Parse {
                line: 0,
                msg: format!("edge {u}-{v} out of range 0..{}", parsed.n),
            });
        }
        g.add_edge(u, v);
    }
    Ok(g)
}

/// Detects the format by the first non-blank byte: `{` means JSON.
pub fn parse_graph(text: &str) -> Result<MultiGraph, GraphError> {
    if text.trim_start().starts_with('{') {
        parse_graph_json(text)
    } else {
        parse_edge_list(text)
    }
}

/// Styling for DOT export. Tree edges are drawn bold, ghost vertices and
/// edges dashed.
#[derive(Debug, Clone, Default)]
pub struct DotStyle {
    pub tree_edges: Vec<usize>,
    pub ghost_vertices: Vec<VertexId>,
    pub ghost_edges: Vec<usize>,
}

pub fn to_dot(g: &MultiGraph, style: &DotStyle) -> String {
    let tree: BTreeSet<usize> = style.tree_edges.iter().copied().collect();
    let ghost_v: BTreeSet<VertexId> = style.ghost_vertices.iter().copied().collect();
    let ghost_e: BTreeSet<usize> = style.ghost_edges.iter().copied().collect();
    let mut out = String::from("graph G {\n  node [shape=circle];\n");
    for v in g.vertices() {
        if ghost_v.contains(&v) {
            let _ = writeln!(out, "  {v} [style=dashed];");
        } else {
            let _ = writeln!(out, "  {v};");
        }
    }
    for (i, e) in g.edges().iter().enumerate() {
        let mut attrs = Vec::new();
        if tree.contains(&i) {
            attrs.push("color=red");
            attrs.push("penwidth=2");
        }
        if ghost_e.contains(&i) {
            attrs.push("style=dashed");
        }
        if attrs.is_empty() {
            let _ = writeln!(out, "  {} -- {};", e.u, e.v);
        } else {
            let _ = writeln!(out, "  {} -- {} [{}];", e.u, e.v, attrs.join(", "));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_parallel_edges() {
        let g = parse_edge_list("# a multigraph\n3 3\n0 1\n0 1 # again\n\n1 2\n").unwrap();
        assert_eq!(g.multiplicity(0, 1), 2);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(parse_graph(&write_edge_list(&g)).unwrap(), g);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_edge_list("").is_err());
        assert!(parse_edge_list("2 1\n0 5\n").is_err());
        assert!(parse_edge_list("2 2\n0 1\n").is_err());
        assert!(parse_edge_list("2 1\n0 x\n").is_err());
    }

    #[test]
    fn json_graphs_are_detected() {
        let g = parse_graph(" {\"n\": 3, \"edges\": [[0,1],[1,2]]}").unwrap();
        assert_eq!(g, MultiGraph::from_edges(3, [(0, 1), (1, 2)]));
    }

    #[test]
    fn dot_marks_tree_and_ghosts() {
        let g = MultiGraph::from_edges(3, [(0, 1), (1, 2)]);
        let dot = to_dot(
            &g,
            &DotStyle {
                tree_edges: vec![0],
                ghost_vertices: vec![2],
                ghost_edges: vec![1],
            },
        );
        assert!(dot.contains("0 -- 1 [color=red, penwidth=2];"));
        assert!(dot.contains("1 -- 2 [style=dashed];"));
        assert!(dot.contains("2 [style=dashed];"));
    }
}
