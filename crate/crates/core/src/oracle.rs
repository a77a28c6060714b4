//! Exact tree-cut widths and treewidth for tiny graphs.
//!
//! The default engine is a dynamic program over vertex subsets. The torso of
//! a node only depends on its bag, the vertex sets of its children's
//! subtrees and the vertex set of its own subtree, so the best width of a
//! subtree with vertex set `Y` is a function of `Y` alone.
//!
//! The enumeration engine combines every near-partition of the vertex set
//! with every labelled tree on its blocks plus up to `empty_budget` empty
//! nodes. Empty nodes are only placed where they have tree degree at least
//! three: an empty node of degree one or two can be removed or suppressed
//! without increasing any of the three widths.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Serialize;
use thiserror::Error;

use crate::decomp::{CenterLevel, DenseMulti, TreeCutDecomposition};
use crate::graph::{Edge, MultiGraph, VertexId};

pub const DEFAULT_SIZE_LIMIT: usize = 6;
pub const DEFAULT_EMPTY_BUDGET: usize = 2;
pub const TREEWIDTH_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph has {n} vertices, oracle limit is {limit}")]
    SizeLimit { n: usize, limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum WidthVariant {
    /// Tree-cut width (3-centers).
    Tcw,
    /// Slim tree-cut width (2-centers).
    Stcw,
    /// 0-tree-cut width (1-centers).
    Tcw0,
}

impl WidthVariant {
    pub const ALL: [WidthVariant; 3] = [WidthVariant::Tcw, WidthVariant::Stcw, WidthVariant::Tcw0];

    pub fn center_level(self) -> CenterLevel {
        match self {
            WidthVariant::Tcw => CenterLevel::Three,
            WidthVariant::Stcw => CenterLevel::Two,
            WidthVariant::Tcw0 => CenterLevel::One,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for WidthVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WidthVariant::Tcw => "tcw",
            WidthVariant::Stcw => "stcw",
            WidthVariant::Tcw0 => "tcw0",
        })
    }
}

impl FromStr for WidthVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tcw" => Ok(WidthVariant::Tcw),
            "stcw" => Ok(WidthVariant::Stcw),
            "tcw0" => Ok(WidthVariant::Tcw0),
            _ => Err(format!("unknown width variant {s:?} (expected tcw, stcw or tcw0)")),
        }
    }
}

/// Search strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Engine {
    /// Dynamic programming over the vertex sets `Y_t` of subtrees. Exact
    /// over all decompositions, with any number of empty bags.
    SubsetDp,
    /// Every near-partition with every labelled tree on its blocks, plus up
    /// to `empty_budget` empty nodes.
    Enumerate,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::SubsetDp => "subset-dp",
            Engine::Enumerate => "enumerate",
        })
    }
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "subset-dp" | "dp" => Ok(Engine::SubsetDp),
            "enumerate" => Ok(Engine::Enumerate),
            _ => Err(format!("unknown engine {s:?} (expected subset-dp or enumerate)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OracleOptions {
    pub size_limit: usize,
    pub engine: Engine,
    /// Empty nodes allowed by [`Engine::Enumerate`].
    pub empty_budget: usize,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            size_limit: DEFAULT_SIZE_LIMIT,
            engine: Engine::SubsetDp,
            empty_budget: DEFAULT_EMPTY_BUDGET,
            jobs: None,
        }
    }
}

/// How the value was obtained. With [`Engine::Enumerate`] the value is the
/// minimum over decompositions with at most `empty_budget` empty nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleMeta {
    pub engine: Engine,
    pub empty_budget: Option<usize>,
    pub exact: bool,
    pub exact_within_budget: bool,
    /// Candidate decompositions (enumeration) or bag choices (dynamic
    /// programming) evaluated.
    pub examined: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactWidth {
    pub variant: WidthVariant,
    pub value: usize,
    pub decomposition: TreeCutDecomposition,
    pub meta: OracleMeta,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactWidths {
    pub tcw: ExactWidth,
    pub stcw: ExactWidth,
    pub tcw0: ExactWidth,
}

impl ExactWidths {
    pub fn get(&self, variant: WidthVariant) -> &ExactWidth {
        match variant {
            WidthVariant::Tcw => &self.tcw,
            WidthVariant::Stcw => &self.stcw,
            WidthVariant::Tcw0 => &self.tcw0,
        }
    }
}

pub fn exact_width(
    g: &MultiGraph,
    variant: WidthVariant,
    opts: &OracleOptions,
) -> Result<ExactWidth, OracleError> {
    let all = exact_widths(g, opts)?;
    Ok(match variant {
        WidthVariant::Tcw => all.tcw,
        WidthVariant::Stcw => all.stcw,
        WidthVariant::Tcw0 => all.tcw0,
    })
}

/// All three widths in one pass. Among optimal decompositions the first in
/// enumeration order is returned, so results are deterministic regardless of
/// the number of threads.
pub fn exact_widths(g: &MultiGraph, opts: &OracleOptions) -> Result<ExactWidths, OracleError> {
    let n = g.vertex_count();
    if n > opts.size_limit || n > 60 {
        return Err(OracleError::SizeLimit {
            n,
            limit: opts.size_limit.min(60),
        });
    }
    let (compact, map) = g.compact();
    let mut back = vec![0; n];
    for (old, new) in map.iter().enumerate() {
        if let Some(new) = *new {
            back[new] = old;
        }
    }
    let edges: Vec<(usize, usize)> = compact.edges().iter().map(|e| (e.u, e.v)).collect();
    match opts.engine {
        Engine::SubsetDp => Ok(subset_dp_widths(n, &edges, &back, opts.jobs)),
        Engine::Enumerate => Ok(enumerate_widths(n, edges, &back, opts)),
    }
}

fn enumerate_widths(
    n: usize,
    edges: Vec<(usize, usize)>,
    back: &[VertexId],
    opts: &OracleOptions,
) -> ExactWidths {
    let search = Search::new(n, edges, opts.empty_budget);
    let parts = partitions(n);
    let found = run_indexed(parts.len(), opts.jobs, |i| search.partition(i, &parts[i]));

    let mut best: [Option<Record>; 3] = [None, None, None];
    let mut examined = 0;
    for (i, (local, count)) in found.into_iter().enumerate() {
        examined += count;
        for (slot, rec) in best.iter_mut().zip(local) {
            if let Some(mut rec) = rec {
                rec.partition = i;
                if slot.as_ref().is_none_or(|b| rec.key() < b.key()) {
                    *slot = Some(rec);
                }
            }
        }
    }
    let meta = OracleMeta {
        engine: Engine::Enumerate,
        empty_budget: Some(opts.empty_budget),
        exact: false,
        exact_within_budget: true,
        examined,
    };
    let make = |variant: WidthVariant| {
        let rec = best[variant.index()].as_ref().expect("some tree always exists");
        ExactWidth {
            variant,
            value: rec.value,
            decomposition: rec.to_decomposition(&parts[rec.partition], back),
            meta: meta.clone(),
        }
    };
    ExactWidths {
        tcw: make(WidthVariant::Tcw),
        stcw: make(WidthVariant::Stcw),
        tcw0: make(WidthVariant::Tcw0),
    }
}

fn subset_dp_widths(
    n: usize,
    edges: &[(usize, usize)],
    back: &[VertexId],
    jobs: Option<usize>,
) -> ExactWidths {
    let make = |variant: WidthVariant| {
        let dp = SubsetDp::solve(n, edges, variant.center_level(), jobs);
        ExactWidth {
            variant,
            value: dp.value,
            decomposition: dp.decomposition(back),
            meta: OracleMeta {
                engine: Engine::SubsetDp,
                empty_budget: None,
                exact: true,
                exact_within_budget: true,
                examined: dp.examined,
            },
        }
    };
    ExactWidths {
        tcw: make(WidthVariant::Tcw),
        stcw: make(WidthVariant::Stcw),
        tcw0: make(WidthVariant::Tcw0),
    }
}

/// Best subtree for one vertex set: width, bag and children's vertex sets.
#[derive(Debug, Clone, Default)]
struct Choice {
    value: usize,
    bag: u64,
    blocks: Vec<u64>,
    examined: u64,
}

struct SubsetDp {
    value: usize,
    root: Choice,
    table: Vec<Choice>,
    examined: u64,
}

struct DpContext<'a> {
    edges: &'a [(usize, usize)],
    level: CenterLevel,
    cut: &'a [usize],
    table: &'a [Choice],
}

impl SubsetDp {
    fn solve(n: usize, edges: &[(usize, usize)], level: CenterLevel, jobs: Option<usize>) -> Self {
        let full: u64 = if n == 0 { 0 } else { (1u64 << n) - 1 };
        if n == 0 {
            return SubsetDp {
                value: 0,
                root: Choice::default(),
                table: Vec::new(),
                examined: 1,
            };
        }
        let size = 1usize << n;
        let cut: Vec<usize> = (0..size as u64)
            .map(|y| {
                edges
                    .iter()
                    .filter(|&&(u, v)| ((y >> u) & 1) != ((y >> v) & 1))
                    .count()
            })
            .collect();
        let mut table = vec![Choice::default(); size];
        let mut examined = 0;
        for k in 1..n {
            let layer: Vec<u64> = (1..full).filter(|y| y.count_ones() as usize == k).collect();
            let ctx = DpContext {
                edges,
                level,
                cut: &cut,
                table: &table,
            };
            let solved = run_indexed(layer.len(), jobs, |i| ctx.best(layer[i], false));
            for (y, choice) in layer.into_iter().zip(solved) {
                examined += choice.examined;
                table[y as usize] = choice;
            }
        }
        let ctx = DpContext {
            edges,
            level,
            cut: &cut,
            table: &table,
        };
        let root = ctx.best(full, true);
        examined += root.examined;
        SubsetDp {
            value: root.value,
            root,
            table,
            examined,
        }
    }

    fn decomposition(&self, back: &[VertexId]) -> TreeCutDecomposition {
        let mut parent = vec![None];
        let mut bags = vec![self.root.bag];
        let mut queue = std::collections::VecDeque::new();
        queue.push_back((0, self.root.blocks.clone()));
        while let Some((node, blocks)) = queue.pop_front() {
            for y in blocks {
                let id = bags.len();
                let c = &self.table[y as usize];
                parent.push(Some(node));
                bags.push(c.bag);
                queue.push_back((id, c.blocks.clone()));
            }
        }
        let bags = bags
            .into_iter()
            .map(|m| (0..back.len()).filter(|&v| (m >> v) & 1 == 1).map(|v| back[v]).collect())
            .collect();
        TreeCutDecomposition::new(0, parent, bags)
    }
}

impl DpContext<'_> {
    fn best(&self, y: u64, root: bool) -> Choice {
        let cut_y = if root { 0 } else { self.cut[y as usize] };
        let mut best = Choice {
            value: usize::MAX,
            ..Choice::default()
        };
        let mut examined = 0;
        let mut blocks = Vec::new();
        // bags in decreasing numeric order, starting with the whole set
        let mut x = y;
        loop {
            if cut_y.max(x.count_ones() as usize) < best.value {
                self.partitions(y, x, y & !x, root, cut_y, &mut blocks, &mut best, &mut examined);
            }
            if x == 0 {
                break;
            }
            x = (x - 1) & y;
        }
        best.examined = examined;
        best
    }

    #[allow(clippy::too_many_arguments)]
    fn partitions(
        &self,
        y: u64,
        x: u64,
        rest: u64,
        root: bool,
        floor: usize,
        blocks: &mut Vec<u64>,
        best: &mut Choice,
        examined: &mut u64,
    ) {
        if rest == 0 {
            *examined += 1;
            let t = self.torso_size(y, x, blocks, root);
            let value = floor.max(t);
            if value < best.value {
                *best = Choice {
                    value,
                    bag: x,
                    blocks: blocks.clone(),
                    examined: 0,
                };
            }
            return;
        }
        let low = rest & rest.wrapping_neg();
        let others = rest & !low;
        // blocks containing the lowest remaining vertex, largest first
        let mut sub = others;
        loop {
            let b = sub | low;
            let skip = x == 0 && b == y;
            let w = self.table[b as usize].value;
            if !skip && floor.max(w) < best.value {
                blocks.push(b);
                self.partitions(y, x, rest & !b, root, floor.max(w), blocks, best, examined);
                blocks.pop();
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & others;
        }
    }

    fn torso_size(&self, y: u64, x: u64, blocks: &[u64], root: bool) -> usize {
        let bag_len = x.count_ones() as usize;
        let parent_slot = bag_len;
        let first_block = bag_len + usize::from(!root);
        let slots = first_block + blocks.len();
        let slot = |v: usize| -> usize {
            let bit = 1u64 << v;
            if x & bit != 0 {
                (x & (bit - 1)).count_ones() as usize
            } else if y & bit == 0 {
                parent_slot
            } else {
                first_block
                    + blocks
                        .iter()
                        .position(|&b| b & bit != 0)
                        .expect("vertex of y lies in a block")
            }
        };
        let mut torso = DenseMulti::new(slots);
        for &(u, v) in self.edges {
            let (a, b) = (slot(u), slot(v));
            if a == b && a >= bag_len {
                continue;
            }
            torso.add_edge(a, b);
        }
        let keep: Vec<bool> = (0..slots).map(|s| s < bag_len).collect();
        torso.reduce(&keep, self.level);
        torso.alive_count()
    }
}

#[cfg(feature = "parallel")]
fn run_indexed<R: Send>(count: usize, jobs: Option<usize>, f: impl Fn(usize) -> R + Sync) -> Vec<R> {
    use rayon::prelude::*;
    let work = || (0..count).into_par_iter().map(&f).collect();
    match jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build() {
            Ok(pool) => pool.install(work),
            Err(_) => (0..count).map(&f).collect(),
        },
        None => work(),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_indexed<R: Send>(count: usize, _jobs: Option<usize>, f: impl Fn(usize) -> R + Sync) -> Vec<R> {
    (0..count).map(f).collect()
}

/// Set partitions of `0..n` as restricted growth strings.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn grow(prefix: &mut Vec<usize>, n: usize, blocks: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for b in 0..=blocks {
            prefix.push(b);
            grow(prefix, n, blocks.max(b + 1), out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::with_capacity(n), n, 0, &mut out);
    out
}

#[derive(Debug, Clone)]
struct Record {
    value: usize,
    partition: usize,
    tree: u64,
    nodes: usize,
    tree_edges: Vec<(usize, usize)>,
}

impl Record {
    fn key(&self) -> (usize, usize, u64) {
        (self.value, self.partition, self.tree)
    }

    // Rooted at node 0, which holds vertex 0 (or is the lone empty node).
    fn to_decomposition(&self, rgs: &[usize], back: &[VertexId]) -> TreeCutDecomposition {
        let mut adj = vec![Vec::new(); self.nodes];
        for &(a, b) in &self.tree_edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut parent = vec![None; self.nodes];
        let mut seen = vec![false; self.nodes];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some(x);
                    stack.push(y);
                }
            }
        }
        let mut bags = vec![Vec::new(); self.nodes];
        for (v, &b) in rgs.iter().enumerate() {
            bags[b].push(back[v]);
        }
        TreeCutDecomposition::new(0, parent, bags)
    }
}

struct Search {
    n: usize,
    edges: Vec<(usize, usize)>,
    empty_budget: usize,
    best: [AtomicUsize; 3],
}

/// Per-partition result: best record per variant and trees examined.
type Local = ([Option<Record>; 3], u64);

impl Search {
    fn new(n: usize, edges: Vec<(usize, usize)>, empty_budget: usize) -> Self {
        Search {
            n,
            edges,
            empty_budget,
            best: [(); 3].map(|_| AtomicUsize::new(usize::MAX)),
        }
    }

    fn partition(&self, _index: usize, rgs: &[usize]) -> Local {
        let k = rgs.iter().max().map_or(0, |m| m + 1);
        let mut masks = vec![0u64; k];
        for (v, &b) in rgs.iter().enumerate() {
            masks[b] |= 1 << v;
        }
        let mut local: [Option<Record>; 3] = [None, None, None];
        let mut tree_index = 0u64;
        let max_empty = self.empty_budget.min(k.saturating_sub(2));
        for e in 0..=max_empty {
            let nodes = (k + e).max(1);
            let mut masks = masks.clone();
            masks.resize(nodes, 0);
            for_each_tree(nodes, k, e, |tree_edges| {
                tree_index += 1;
                if let Some(widths) = self.evaluate(&masks, tree_edges) {
                    for (vi, &w) in widths.iter().enumerate() {
                        if local[vi].as_ref().is_none_or(|r| w < r.value) {
                            self.best[vi].fetch_min(w, Ordering::Relaxed);
                            local[vi] = Some(Record {
                                value: w,
                                partition: 0,
                                tree: tree_index,
                                nodes,
                                tree_edges: tree_edges.to_vec(),
                            });
                        }
                    }
                }
            });
        }
        (local, tree_index)
    }

    /// Widths `[tcw, stcw, tcw0]` of one decomposition, or `None` once it
    /// is known to be strictly worse than the best found so far in every
    /// variant.
    fn evaluate(&self, masks: &[u64], tree_edges: &[(usize, usize)]) -> Option<[usize; 3]> {
        let nodes = masks.len();
        let best = [0, 1, 2].map(|i| self.best[i].load(Ordering::Relaxed));
        let hopeless = |w: &[usize; 3]| (0..3).all(|i| w[i] > best[i]);

        let mut adj = vec![Vec::new(); nodes];
        for &(a, b) in tree_edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        // side[t][j]: vertices beyond t's j-th tree neighbor
        let side: Vec<Vec<u64>> = (0..nodes)
            .map(|t| adj[t].iter().map(|&a| reach(&adj, masks, a, t)).collect())
            .collect();
        let cut = |s: u64| {
            self.edges
                .iter()
                .filter(|&&(u, v)| ((s >> u) & 1) != ((s >> v) & 1))
                .count()
        };
        let adhesion = tree_edges
            .iter()
            .map(|&(a, b)| {
                let j = adj[a].iter().position(|&x| x == b).expect("tree edge");
                cut(side[a][j])
            })
            .max()
            .unwrap_or(0);
        let mut widths = [adhesion; 3];
        if hopeless(&widths) {
            return None;
        }
        for t in 0..nodes {
            let bag = masks[t];
            let bag_len = bag.count_ones() as usize;
            let slots = bag_len + adj[t].len();
            let mut slot_of = vec![0; self.n];
            for v in 0..self.n {
                slot_of[v] = if (bag >> v) & 1 == 1 {
                    (bag & ((1 << v) - 1)).count_ones() as usize
                } else {
                    bag_len
                        + side[t]
                            .iter()
                            .position(|&s| (s >> v) & 1 == 1)
                            .expect("vertex lies somewhere")
                };
            }
            let mut torso = DenseMulti::new(slots);
            for &(u, v) in &self.edges {
                let (a, b) = (slot_of[u], slot_of[v]);
                if a == b && a >= bag_len {
                    continue;
                }
                torso.add_edge(a, b);
            }
            let keep: Vec<bool> = (0..slots).map(|s| s < bag_len).collect();
            for (i, level) in [CenterLevel::Three, CenterLevel::Two, CenterLevel::One]
                .into_iter()
                .enumerate()
            {
                let mut c = torso.clone();
                c.reduce(&keep, level);
                widths[i] = widths[i].max(c.alive_count());
            }
            if hopeless(&widths) {
                return None;
            }
        }
        Some(widths)
    }
}

fn reach(adj: &[Vec<usize>], masks: &[u64], start: usize, blocked: usize) -> u64 {
    let mut acc = 0;
    let mut stack = vec![(start, blocked)];
    while let Some((x, from)) = stack.pop() {
        acc |= masks[x];
        for &y in &adj[x] {
            if y != from {
                stack.push((y, x));
            }
        }
    }
    acc
}

/// Calls `f` with the edge list of every labelled tree on `nodes` nodes in
/// which each of the `empty` nodes `k..k+empty` has degree at least three.
/// With two empty nodes only one of the two label orders is produced.
fn for_each_tree(nodes: usize, k: usize, empty: usize, mut f: impl FnMut(&[(usize, usize)])) {
    match nodes {
        0 | 1 => return f(&[]),
        2 => return f(&[(0, 1)]),
        _ => {}
    }
    let len = nodes - 2;
    let mut seq = vec![0; len];
    let mut edges = Vec::with_capacity(nodes - 1);
    loop {
        if empty_ok(&seq, k, empty) {
            prufer_decode(&seq, nodes, &mut edges);
            f(&edges);
        }
        let mut i = len;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            seq[i] += 1;
            if seq[i] < nodes {
                break;
            }
            seq[i] = 0;
        }
    }
}

fn empty_ok(seq: &[usize], k: usize, empty: usize) -> bool {
    let mut count = [0usize; 8];
    let mut first = [usize::MAX; 8];
    for (i, &s) in seq.iter().enumerate() {
        if s >= k {
            let j = s - k;
            count[j] += 1;
            first[j] = first[j].min(i);
        }
    }
    (0..empty).all(|j| count[j] >= 2) && (1..empty).all(|j| first[j - 1] < first[j])
}

fn prufer_decode(seq: &[usize], nodes: usize, edges: &mut Vec<(usize, usize)>) {
    edges.clear();
    let mut degree = vec![1; nodes];
    for &s in seq {
        degree[s] += 1;
    }
    for &s in seq {
        let leaf = (0..nodes).find(|&x| degree[x] == 1).expect("a leaf exists");
        edges.push((leaf.min(s), leaf.max(s)));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..nodes).filter(|&x| degree[x] == 1).collect();
    edges.push((rest[0], rest[1]));
}

/// Memoises [`exact_widths`] by canonical form. Results are computed on the
/// canonical relabelling and mapped back, so a hit returns exactly what a
/// miss would.
#[derive(Debug, Default)]
pub struct OracleCache {
    opts: OracleOptions,
    map: Mutex<HashMap<(usize, Vec<Edge>), ExactWidths>>,
}

impl OracleCache {
    pub fn new(opts: OracleOptions) -> Self {
        OracleCache {
            opts,
            map: Mutex::default(),
        }
    }

    pub fn options(&self) -> &OracleOptions {
        &self.opts
    }

    pub fn len(&self) -> usize {
        self.map.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn widths(&self, g: &MultiGraph) -> Result<ExactWidths, OracleError> {
        let n = g.vertex_count();
        if n > self.opts.size_limit {
            return Err(OracleError::SizeLimit {
                n,
                limit: self.opts.size_limit,
            });
        }
        let (canon, perm) = g.canonical_form();
        let key = (n, canon);
        let cached = self.map.lock().expect("cache lock").get(&key).cloned();
        let result = match cached {
            Some(r) => r,
            None => {
                let cg = MultiGraph::from_edges(n, key.1.iter().map(|e| (e.u, e.v)));
                let r = exact_widths(&cg, &self.opts)?;
                self.map.lock().expect("cache lock").insert(key, r.clone());
                r
            }
        };
        // canonical id -> original id
        let (_, compact_map) = g.compact();
        let mut to_orig = vec![0; n];
        for (old, c) in compact_map.iter().enumerate() {
            if let Some(c) = *c {
                to_orig[perm[c]] = old;
            }
        }
        let relabel = |w: ExactWidth| ExactWidth {
            decomposition: w.decomposition.map_vertices(|v| Some(to_orig[v])),
            ..w
        };
        Ok(ExactWidths {
            tcw: relabel(result.tcw),
            stcw: relabel(result.stcw),
            tcw0: relabel(result.tcw0),
        })
    }

    pub fn width(&self, g: &MultiGraph, variant: WidthVariant) -> Result<ExactWidth, OracleError> {
        let all = self.widths(g)?;
        Ok(all.get(variant).clone())
    }
}

/// Exact treewidth of the underlying simple graph by dynamic programming
/// over vertex subsets.
pub fn exact_treewidth(g: &MultiGraph) -> Result<usize, OracleError> {
    let (c, _) = g.compact();
    let n = c.capacity();
    if n > TREEWIDTH_LIMIT {
        return Err(OracleError::SizeLimit {
            n,
            limit: TREEWIDTH_LIMIT,
        });
    }
    if n == 0 {
        return Ok(0);
    }
    let mut nbr = vec![0u32; n];
    for e in c.edges() {
        if !e.is_loop() {
            nbr[e.u] |= 1 << e.v;
            nbr[e.v] |= 1 << e.u;
        }
    }
    // vertices outside s ∪ {v} reachable from v through s
    let q = |s: u32, v: usize| -> u32 {
        let mut comp = 1u32 << v;
        let mut frontier = comp;
        while frontier != 0 {
            let x = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let grow = nbr[x] & s & !comp;
            comp |= grow;
            frontier |= grow;
        }
        let mut out = 0;
        let mut c = comp;
        while c != 0 {
            let x = c.trailing_zeros() as usize;
            c &= c - 1;
            out |= nbr[x];
        }
        out & !comp & !s
    };
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut tw = vec![i32::MAX; 1 << n];
    tw[0] = -1;
    for s in 1..=full {
        let mut best = i32::MAX;
        let mut bits = s;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let rest = s & !(1 << v);
            let here = tw[rest as usize].max(q(rest, v).count_ones() as i32);
            best = best.min(here);
        }
        tw[s as usize] = best;
    }
    Ok(tw[full as usize].max(0) as usize)
}
