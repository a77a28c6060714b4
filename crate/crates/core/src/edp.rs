//! Edge-disjoint paths, decided by dynamic programming along the spanning
//! forest of a witness, with an exhaustive solver for cross-checking.
//!
//! Every demand pair gets its own colour. A routing colours each graph edge
//! with at most one pair; at every vertex each colour then has degree one
//! (the vertex is that pair's terminal) or zero or two (otherwise). The
//! dynamic program grows vertex sets bottom-up along the forest and keeps,
//! for the edges leaving the current set, their colours and which of them
//! are joined by a path fragment inside the set. Ghost edges are never
//! coloured.

use std::collections::{HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::ecw::{EcwError, SpanningWitness};
use crate::graph::{MultiGraph, VertexId};

pub const DEFAULT_BRUTEFORCE_LIMIT: usize = 14;
const MAX_PAIRS: usize = 60;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EdpError {
    #[error(transparent)]
    Witness(#[from] EcwError),
    #[error("terminal {0} is not a vertex of the graph")]
    Terminal(VertexId),
    #[error("graph has {edges} edges, brute force limit is {limit}")]
    TooManyEdges { edges: usize, limit: usize },
    #[error("at most {MAX_PAIRS} pairs are supported, got {0}")]
    TooManyPairs(usize),
}

fn check_pairs(g: &MultiGraph, pairs: &[(VertexId, VertexId)]) -> Result<(), EdpError> {
    if pairs.len() > MAX_PAIRS {
        return Err(EdpError::TooManyPairs(pairs.len()));
    }
    for &(s, t) in pairs {
        for v in [s, t] {
            if !g.has_vertex(v) {
                return Err(EdpError::Terminal(v));
            }
        }
    }
    Ok(())
}

const TERMINAL: u8 = u8::MAX - 1;
const UNUSED: u8 = u8::MAX;

/// Colours of the edges leaving a vertex set (aligned with the set's sorted
/// boundary; colour 0 is unused) and, for each coloured edge, the other end
/// of its fragment: another boundary position or [`TERMINAL`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct State {
    colors: Vec<u8>,
    mate: Vec<u8>,
    done: u64,
}

struct Part {
    boundary: Vec<usize>,
    states: HashSet<State>,
}

struct Dp<'a> {
    host: &'a MultiGraph,
    usable: Vec<bool>,
    /// terminal_of[v]: bit c set when v ends pair c
    terminal_of: Vec<u64>,
    colors: u8,
}

impl Dp<'_> {
    fn single(&self, v: VertexId) -> Part {
        let mut boundary: Vec<usize> = self
            .host
            .incident_edges(v)
            .into_iter()
            .filter(|&i| !self.host.edge(i).is_loop())
            .collect();
        boundary.sort_unstable();
        boundary.dedup();
        let mut states = HashSet::new();
        let mut colors = vec![0u8; boundary.len()];
        self.assign(v, &boundary, 0, &mut colors, &mut states);
        Part { boundary, states }
    }

    fn assign(
        &self,
        v: VertexId,
        boundary: &[usize],
        i: usize,
        colors: &mut Vec<u8>,
        out: &mut HashSet<State>,
    ) {
        if i == boundary.len() {
            if let Some(s) = self.local_state(v, colors) {
                out.insert(s);
            }
            return;
        }
        let top = if self.usable[boundary[i]] { self.colors } else { 0 };
        for c in 0..=top {
            colors[i] = c;
            self.assign(v, boundary, i + 1, colors, out);
        }
        colors[i] = 0;
    }

    fn local_state(&self, v: VertexId, colors: &[u8]) -> Option<State> {
        let mut mate = vec![UNUSED; colors.len()];
        for c in 1..=self.colors {
            let at: Vec<usize> = (0..colors.len()).filter(|&i| colors[i] == c).collect();
            let terminal = (self.terminal_of[v] >> (c - 1)) & 1 == 1;
            match (terminal, &at[..]) {
                (true, [a]) => mate[*a] = TERMINAL,
                (false, []) => {}
                (false, [a, b]) => {
                    mate[*a] = *b as u8;
                    mate[*b] = *a as u8;
                }
                _ => return None,
            }
        }
        Some(State {
            colors: colors.to_vec(),
            mate,
            done: 0,
        })
    }

    fn merge(&self, a: &Part, b: &Part) -> Part {
        let in_b: HashMap<usize, usize> = b.boundary.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let shared_a: Vec<Option<usize>> = a.boundary.iter().map(|e| in_b.get(e).copied()).collect();
        let mut shared_b = vec![None; b.boundary.len()];
        for (i, s) in shared_a.iter().enumerate() {
            if let Some(j) = *s {
                shared_b[j] = Some(i);
            }
        }
        // merged boundary: unshared edges of a then of b, kept sorted
        let mut ends: Vec<(usize, bool, usize)> = Vec::new();
        for (i, &e) in a.boundary.iter().enumerate() {
            if shared_a[i].is_none() {
                ends.push((e, false, i));
            }
        }
        for (j, &e) in b.boundary.iter().enumerate() {
            if shared_b[j].is_none() {
                ends.push((e, true, j));
            }
        }
        ends.sort_unstable();
        let boundary: Vec<usize> = ends.iter().map(|x| x.0).collect();
        let mut pos_a = vec![usize::MAX; a.boundary.len()];
        let mut pos_b = vec![usize::MAX; b.boundary.len()];
        for (k, &(_, side_b, i)) in ends.iter().enumerate() {
            if side_b {
                pos_b[i] = k;
            } else {
                pos_a[i] = k;
            }
        }
        let ctx = MergeCtx {
            shared: [&shared_a, &shared_b],
            pos: [&pos_a, &pos_b],
            width: boundary.len(),
        };
        let mut states = HashSet::new();
        for sa in &a.states {
            for sb in &b.states {
                if let Some(s) = ctx.combine(sa, sb) {
                    states.insert(s);
                }
            }
        }
        Part { boundary, states }
    }
}

struct MergeCtx<'a> {
    shared: [&'a [Option<usize>]; 2],
    pos: [&'a [usize]; 2],
    width: usize,
}

impl MergeCtx<'_> {
    fn combine(&self, sa: &State, sb: &State) -> Option<State> {
        let st = [sa, sb];
        for (i, s) in self.shared[0].iter().enumerate() {
            if let Some(j) = *s {
                if sa.colors[i] != sb.colors[j] {
                    return None;
                }
            }
        }
        let mut colors = vec![0u8; self.width];
        let mut mate = vec![UNUSED; self.width];
        let mut done = sa.done | sb.done;
        let mut visited = [vec![false; sa.colors.len()], vec![false; sb.colors.len()]];

        // Follows a fragment that enters side `side` at boundary position
        // `i` and returns where it leaves the merged set.
        let walk = |mut side: usize, mut i: usize, visited: &mut [Vec<bool>; 2]| -> u8 {
            loop {
                visited[side][i] = true;
                let m = st[side].mate[i];
                if m == TERMINAL {
                    return TERMINAL;
                }
                let m = m as usize;
                visited[side][m] = true;
                match self.shared[side][m] {
                    None => return self.pos[side][m] as u8,
                    Some(other) => {
                        side = 1 - side;
                        i = other;
                    }
                }
            }
        };

        for side in 0..2 {
            for i in 0..st[side].colors.len() {
                let c = st[side].colors[i];
                if c == 0 || self.shared[side][i].is_some() {
                    continue;
                }
                let k = self.pos[side][i];
                colors[k] = c;
                if visited[side][i] {
                    continue;
                }
                let end = walk(side, i, &mut visited);
                mate[k] = end;
                if end != TERMINAL {
                    mate[end as usize] = k as u8;
                }
            }
        }
        // fragments that start at a terminal and pass only through shared edges
        for side in 0..2 {
            for i in 0..st[side].colors.len() {
                let c = st[side].colors[i];
                if c == 0 || visited[side][i] || st[side].mate[i] != TERMINAL {
                    continue;
                }
                visited[side][i] = true;
                let Some(other) = self.shared[side][i] else { continue };
                if walk(1 - side, other, &mut visited) == TERMINAL {
                    done |= 1 << (c - 1);
                }
            }
        }
        for side in 0..2 {
            for i in 0..st[side].colors.len() {
                if st[side].colors[i] != 0 && !visited[side][i] {
                    // closed cycle; the same routing without it is also present
                    return None;
                }
            }
        }
        Some(State { colors, mate, done })
    }
}

/// Decides edge-disjoint paths for `pairs` in `g`, processing the witness
/// forest bottom-up. Only edges of `g` are used for routing.
pub fn edp_solve_dp(
    g: &MultiGraph,
    w: &SpanningWitness,
    pairs: &[(VertexId, VertexId)],
) -> Result<bool, EdpError> {
    w.validate_for(g)?;
    check_pairs(g, pairs)?;
    let host = w.host();
    let mut terminal_of = vec![0u64; host.capacity()];
    let mut trivially_done = 0u64;
    for (c, &(s, t)) in pairs.iter().enumerate() {
        if s == t {
            trivially_done |= 1 << c;
        } else {
            terminal_of[s] |= 1 << c;
            terminal_of[t] |= 1 << c;
        }
    }
    let full = if pairs.is_empty() { 0 } else { u64::MAX >> (64 - pairs.len()) };
    let dp = Dp {
        host,
        usable: (0..host.edge_count())
            .map(|i| !w.is_ghost_edge(i) && !host.edge(i).is_loop())
            .collect(),
        terminal_of,
        colors: pairs.len() as u8,
    };

    let mut children = vec![Vec::new(); host.capacity()];
    let mut adj = vec![Vec::new(); host.capacity()];
    for &i in w.forest() {
        let e = host.edge(i);
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    let mut roots = Vec::new();
    let mut order = Vec::new();
    let mut seen = vec![false; host.capacity()];
    for r in host.vertices() {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        roots.push(r);
        let mut stack = vec![r];
        while let Some(x) = stack.pop() {
            order.push(x);
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    children[x].push(y);
                    stack.push(y);
                }
            }
        }
    }

    let mut parts: Vec<Option<Part>> = (0..host.capacity()).map(|_| None).collect();
    for &v in order.iter().rev() {
        let mut part = dp.single(v);
        for &c in &children[v] {
            let child = parts[c].take().expect("children finish first");
            part = dp.merge(&part, &child);
            if part.states.is_empty() {
                return Ok(false);
            }
        }
        parts[v] = Some(part);
    }
    let mut reachable: HashSet<u64> = HashSet::from([trivially_done]);
    for r in roots {
        let part = parts[r].take().expect("root processed");
        debug_assert!(part.boundary.is_empty());
        let masks: HashSet<u64> = part.states.iter().map(|s| s.done).collect();
        reachable = reachable
            .iter()
            .flat_map(|&a| masks.iter().map(move |&b| a | b))
            .collect();
        if reachable.is_empty() {
            return Ok(false);
        }
    }
    Ok(reachable.contains(&full))
}

/// One routed demand of a path system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoutedPath {
    pub pair: usize,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<usize>,
}

/// Exhaustive search over simple paths, pair by pair. Returns one path
/// system when the instance is a yes-instance.
pub fn edp_bruteforce(
    g: &MultiGraph,
    pairs: &[(VertexId, VertexId)],
    limit: usize,
) -> Result<Option<Vec<RoutedPath>>, EdpError> {
    if g.edge_count() > limit {
        return Err(EdpError::TooManyEdges {
            edges: g.edge_count(),
            limit,
        });
    }
    check_pairs(g, pairs)?;
    let mut used = vec![false; g.edge_count()];
    let mut out = Vec::new();
    Ok(route(g, pairs, 0, &mut used, &mut out).then_some(out))
}

fn route(
    g: &MultiGraph,
    pairs: &[(VertexId, VertexId)],
    k: usize,
    used: &mut Vec<bool>,
    out: &mut Vec<RoutedPath>,
) -> bool {
    let Some(&(s, t)) = pairs.get(k) else {
        return true;
    };
    let mut on_path = vec![false; g.capacity()];
    let mut vertices = vec![s];
    let mut edges = Vec::new();
    on_path[s] = true;
    extend(g, pairs, k, t, used, &mut on_path, &mut vertices, &mut edges, out)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    g: &MultiGraph,
    pairs: &[(VertexId, VertexId)],
    k: usize,
    t: VertexId,
    used: &mut Vec<bool>,
    on_path: &mut Vec<bool>,
    vertices: &mut Vec<VertexId>,
    edges: &mut Vec<usize>,
    out: &mut Vec<RoutedPath>,
) -> bool {
    let x = *vertices.last().expect("path starts at s");
    if x == t {
        out.push(RoutedPath {
            pair: k,
            vertices: vertices.clone(),
            edges: edges.clone(),
        });
        if route(g, pairs, k + 1, used, out) {
            return true;
        }
        out.pop();
        return false;
    }
    for i in g.incident_edges(x) {
        let e = g.edge(i);
        if used[i] || e.is_loop() {
            continue;
        }
        let y = e.other(x);
        if on_path[y] {
            continue;
        }
        used[i] = true;
        on_path[y] = true;
        vertices.push(y);
        edges.push(i);
        if extend(g, pairs, k, t, used, on_path, vertices, edges, out) {
            return true;
        }
        edges.pop();
        vertices.pop();
        on_path[y] = false;
        used[i] = false;
    }
    false
}

/// Parses `"0-2,1-3"`.
pub fn parse_pairs(text: &str) -> Result<Vec<(VertexId, VertexId)>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|p| {
            let (a, b) = p
                .split_once('-')
                .ok_or_else(|| format!("pair {p:?} is not of the form a-b"))?;
            let parse = |x: &str| {
                x.trim()
                    .parse::<VertexId>()
                    .map_err(|e| format!("bad vertex {x:?}: {e}"))
            };
            Ok((parse(a)?, parse(b)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ecw::dfs_spanning_forest;

    fn c4() -> MultiGraph {
        MultiGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    }

    fn solve(g: &MultiGraph, pairs: &[(usize, usize)]) -> bool {
        let w = SpanningWitness::from_graph(g, dfs_spanning_forest(g));
        edp_solve_dp(g, &w, pairs).unwrap()
    }

    #[test]
    fn c4_examples() {
        let g = c4();
        assert!(solve(&g, &[(0, 2), (0, 2)]));
        assert!(!solve(&g, &[(0, 2), (1, 3)]));
        assert!(solve(&g, &[(0, 1)]));
        let paths = edp_bruteforce(&g, &[(0, 2), (0, 2)], 14).unwrap().unwrap();
        assert_eq!(paths.len(), 2);
        assert_eq!(edp_bruteforce(&g, &[(0, 2), (1, 3)], 14).unwrap(), None);
    }

    #[test]
    fn three_paths_through_a_degree_two_vertex_fail() {
        let g = c4();
        assert!(!solve(&g, &[(0, 2), (0, 2), (0, 2)]));
    }

    #[test]
    fn trivial_and_disconnected_pairs() {
        let g = MultiGraph::from_edges(4, [(0, 1), (2, 3)]);
        assert!(solve(&g, &[(1, 1)]));
        assert!(solve(&g, &[]));
        assert!(solve(&g, &[(0, 1), (3, 2)]));
        assert!(!solve(&g, &[(0, 2)]));
    }

    #[test]
    fn ghost_edges_are_not_routed() {
        // path 0-1 and vertex 2, host adds ghost edges 1-2 and 0-2
        let g = MultiGraph::from_edges(3, [(0, 1)]);
        let mut host = g.clone();
        host.add_edge(1, 2);
        host.add_edge(0, 2);
        let w = SpanningWitness::new(host, vec![false; 3], vec![false, true, true], vec![0, 1]);
        assert!(!edp_solve_dp(&g, &w, &[(0, 2)]).unwrap());
        assert!(edp_solve_dp(&g, &w, &[(1, 0)]).unwrap());
    }

    #[test]
    fn parallel_edges_carry_separate_paths() {
        let g = MultiGraph::from_edges(2, [(0, 1), (0, 1)]);
        assert!(solve(&g, &[(0, 1), (0, 1)]));
        assert!(!solve(&g, &[(0, 1), (0, 1), (1, 0)]));
    }

    #[test]
    fn errors() {
        let g = c4();
        assert_eq!(
            edp_bruteforce(&g, &[(0, 9)], 14),
            Err(EdpError::Terminal(9))
        );
        assert_eq!(
            edp_bruteforce(&g, &[(0, 1)], 3),
            Err(EdpError::TooManyEdges { edges: 4, limit: 3 })
        );
        let w = SpanningWitness::from_graph(&g, vec![0, 1]);
        assert!(matches!(edp_solve_dp(&g, &w, &[(0, 1)]), Err(EdpError::Witness(_))));
    }

    #[test]
    fn pair_parsing() {
        assert_eq!(parse_pairs("0-2, 1-3"), Ok(vec![(0, 2), (1, 3)]));
        assert!(parse_pairs("0:2").is_err());
    }
}
