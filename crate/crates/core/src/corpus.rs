//! Small test corpora: all connected graphs up to isomorphism and seeded
//! random samples.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{random_graph, Edge, MultiGraph};

pub const DEFAULT_SEED: u64 = 0x5eed;

/// Every connected simple graph on `1..=max_n` vertices, one per
/// isomorphism class, ordered by vertex count and then canonical edge list.
pub fn connected_graphs(max_n: usize) -> Vec<MultiGraph> {
    simple_graphs(max_n, true)
}

/// Every simple graph on `1..=max_n` vertices up to isomorphism.
pub fn all_graphs(max_n: usize) -> Vec<MultiGraph> {
    simple_graphs(max_n, false)
}

fn simple_graphs(max_n: usize, connected: bool) -> Vec<MultiGraph> {
    assert!(max_n <= 7, "exhaustive generation is limited to 7 vertices");
    let mut out = Vec::new();
    for n in 1..=max_n {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let mut seen: BTreeSet<Vec<Edge>> = BTreeSet::new();
        for mask in 0u64..(1 << pairs.len()) {
            if connected && (mask.count_ones() as usize) + 1 < n {
                continue;
            }
            let g = MultiGraph::from_edges(
                n,
                pairs.iter().enumerate().filter(|(i, _)| (mask >> i) & 1 == 1).map(|(_, &p)| p),
            );
            if !connected || g.is_connected() {
                seen.insert(g.canonical_form().0);
            }
        }
        out.extend(
            seen.into_iter()
                .map(|edges| MultiGraph::from_edges(n, edges.into_iter().map(|e| (e.u, e.v)))),
        );
    }
    out
}

/// `count` seeded random simple graphs on `n` vertices, edge probability
/// drawn uniformly from `[0.2, 0.8]` per graph.
pub fn random_sample(count: usize, n: usize, seed: u64) -> Vec<MultiGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let p = rng.gen_range(0.2..0.8);
            random_graph(n, p, &mut rng)
        })
        .collect()
}
