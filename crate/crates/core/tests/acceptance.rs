//! End-to-end acceptance suite. Each criterion prints one PASS/FAIL line
//! straight to stderr so the summary shows up even when output is captured.

use std::io::Write;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cutwidth::approx::{approximate_stcw, slim_width_bound, OracleProvider};
use cutwidth::corpus::{all_graphs, connected_graphs, random_sample, DEFAULT_SEED};
use cutwidth::decomp::{is_very_nice, validate, width_report, TreeCutDecomposition};
use cutwidth::ecw::{
    dfs_spanning_forest, ecw_value, exact_ecw, sec_upper, SecOptions, SpanningWitness,
    DEFAULT_ENUMERATION_BUDGET,
};
use cutwidth::edp::{edp_bruteforce, edp_solve_dp, DEFAULT_BRUTEFORCE_LIMIT};
use cutwidth::graph::{
    apply_immersion, edge_sum, make_family, random_connected_graph, random_graph, Family,
    ImmersionOp, ImmersionOptions,
};
use cutwidth::oracle::{
    exact_treewidth, exact_width, exact_widths, Engine, ExactWidths, OracleCache, OracleOptions,
    WidthVariant,
};
use cutwidth::transform::{decomposition_to_witness, make_very_nice};
use cutwidth::MultiGraph;

struct Entry {
    graph: MultiGraph,
    widths: ExactWidths,
}

/// Connected graphs on at most five vertices plus a seeded sample on six.
fn corpus() -> &'static [Entry] {
    static CORPUS: OnceLock<Vec<Entry>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let opts = OracleOptions::default();
        connected_graphs(5)
            .into_iter()
            .chain(random_sample(200, 6, DEFAULT_SEED))
            .map(|graph| {
                let widths = exact_widths(&graph, &opts).expect("corpus fits the oracle");
                Entry { graph, widths }
            })
            .collect()
    })
}

fn report(id: u32, failures: &[String], detail: &str) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "criterion {id:>2} {status}: {detail}");
    for f in failures.iter().take(10) {
        let _ = writeln!(err, "    {f}");
    }
    assert!(failures.is_empty(), "criterion {id}: {} violation(s)", failures.len());
}

fn edges_of(g: &MultiGraph) -> String {
    g.edges()
        .iter()
        .map(|e| format!("{}-{}", e.u, e.v))
        .collect::<Vec<_>>()
        .join(",")
}

#[test]
fn criterion_01_ladder_edge_cut_width() {
    let start = Instant::now();
    let ladder = make_family(Family::Ladder, 9).unwrap();
    let tree = ladder.spanning_tree.expect("ladder has a distinguished tree");
    let mut failures = Vec::new();
    let given = ecw_value(&ladder.graph, &tree).unwrap();
    if given != 3 {
        failures.push(format!("distinguished tree has ecw {given}, expected 3"));
    }
    let opt = exact_ecw(&ladder.graph, DEFAULT_ENUMERATION_BUDGET).unwrap();
    if opt.value > 3 {
        failures.push(format!("optimum {} exceeds 3", opt.value));
    }
    if opt.forests_examined != 40545 {
        failures.push(format!("examined {} spanning trees, expected 40545", opt.forests_examined));
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(60) {
        failures.push(format!("took {elapsed:?}"));
    }
    report(
        1,
        &failures,
        &format!(
            "ladder(9): tree ecw {given}, optimum {} over {} trees in {elapsed:.2?}",
            opt.value, opt.forests_examined
        ),
    );
}

#[test]
fn criterion_02_extremal_families() {
    let start = Instant::now();
    let opts = OracleOptions {
        size_limit: 9,
        ..OracleOptions::default()
    };
    let star = make_family(Family::Star, 4).unwrap().graph;
    let windmill = make_family(Family::Windmill, 4).unwrap().graph;
    let s = exact_widths(&star, &opts).unwrap();
    let w = exact_widths(&windmill, &opts).unwrap();
    let mut failures = Vec::new();
    if s.tcw0.value < 2 {
        failures.push(format!("tcw0(S4) = {} < 2", s.tcw0.value));
    }
    if s.stcw.value != 1 {
        failures.push(format!("stcw(S4) = {} != 1", s.stcw.value));
    }
    if w.stcw.value < 2 {
        failures.push(format!("stcw(W4) = {} < 2", w.stcw.value));
    }
    if w.tcw.value != 2 {
        failures.push(format!("tcw(W4) = {} != 2", w.tcw.value));
    }
    // the star also fits the bounded-empty-bag enumeration
    let enumerate = OracleOptions {
        engine: Engine::Enumerate,
        ..OracleOptions::default()
    };
    for v in WidthVariant::ALL {
        let e = exact_width(&star, v, &enumerate).unwrap().value;
        if e != s.get(v).value {
            failures.push(format!("{v}(S4): enumeration {e}, dynamic programming {}", s.get(v).value));
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(600) {
        failures.push(format!("took {elapsed:?}"));
    }
    report(
        2,
        &failures,
        &format!(
            "S4 tcw0 {} stcw {}; W4 stcw {} tcw {} in {elapsed:.2?}",
            s.tcw0.value, s.stcw.value, w.stcw.value, w.tcw.value
        ),
    );
}

#[test]
fn criterion_03_inequality_chains() {
    let mut failures = Vec::new();
    let sec_opts = SecOptions::default();
    let mut nodes = 0;
    for e in corpus() {
        let g = &e.graph;
        let (tcw, stcw, tcw0) = (e.widths.tcw.value, e.widths.stcw.value, e.widths.tcw0.value);
        if !(tcw <= stcw && stcw <= tcw0) {
            failures.push(format!("[{}] tcw {tcw} stcw {stcw} tcw0 {tcw0}", edges_of(g)));
        }
        let sec = sec_upper(g, Some(&e.widths.stcw.decomposition), &sec_opts);
        sec.witness.validate_for(g).unwrap();
        let ecw = exact_ecw(g, DEFAULT_ENUMERATION_BUDGET).unwrap().value;
        let fen = g.feedback_edge_number();
        if !(tcw <= sec.value && sec.value <= ecw && ecw <= fen + 1) {
            failures.push(format!(
                "[{}] tcw {tcw} sec {} ecw {ecw} fen+1 {}",
                edges_of(g),
                sec.value,
                fen + 1
            ));
        }
        for v in WidthVariant::ALL {
            let r = width_report(&e.widths.get(v).decomposition, g).unwrap();
            for s in &r.per_node {
                nodes += 1;
                if !(s.tor <= s.tor2 && s.tor2 <= s.tor1) {
                    failures.push(format!(
                        "[{}] {v} node {}: tor {} tor2 {} tor1 {}",
                        edges_of(g),
                        s.node,
                        s.tor,
                        s.tor2,
                        s.tor1
                    ));
                }
            }
        }
    }
    report(
        3,
        &failures,
        &format!("{} graphs, {nodes} decomposition nodes, {} violations", corpus().len(), failures.len()),
    );
}

#[test]
fn criterion_04_witness_bound() {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for e in corpus() {
        let g = &e.graph;
        let k = e.widths.stcw.value;
        let w = decomposition_to_witness(g, &e.widths.stcw.decomposition).unwrap();
        w.validate_for(g).unwrap();
        let ecw = w.ecw().unwrap();
        let bound = 3 * (k + 1) * (k + 1);
        worst = worst.max(ecw as f64 / bound as f64);
        if ecw > bound {
            failures.push(format!("[{}] stcw {k}: witness ecw {ecw} > {bound}", edges_of(g)));
        }
    }
    report(
        4,
        &failures,
        &format!("{} witnesses, max ecw/bound ratio {worst:.2}", corpus().len()),
    );
}

#[test]
fn criterion_05_approximation_contract() {
    let provider = OracleProvider::default();
    let mut failures = Vec::new();
    let (mut runs, mut yes) = (0, 0);
    for g in all_graphs(5) {
        let stcw = exact_width(&g, WidthVariant::Stcw, &provider.options).unwrap().value;
        for omega in 1..=4 {
            runs += 1;
            let out = approximate_stcw(&g, omega, &provider).unwrap();
            if !out.yes {
                if stcw <= omega {
                    failures.push(format!("[{}] omega {omega}: no, but stcw = {stcw}", edges_of(&g)));
                }
                continue;
            }
            yes += 1;
            let d = out.decomposition.as_ref().expect("yes carries a decomposition");
            if let Err(v) = validate(d, &g) {
                failures.push(format!("[{}] omega {omega}: invalid output {v:?}", edges_of(&g)));
                continue;
            }
            let slim = width_report(d, &g).unwrap().slim_width;
            if slim > slim_width_bound(omega) || Some(slim) != out.slim_width {
                failures.push(format!("[{}] omega {omega}: slim width {slim}", edges_of(&g)));
            }
        }
    }
    report(
        5,
        &failures,
        &format!("{runs} runs over graphs on at most 5 vertices, {yes} yes"),
    );
}

fn random_op(g: &MultiGraph, rng: &mut ChaCha8Rng) -> Option<ImmersionOp> {
    let vs: Vec<usize> = g.vertices().collect();
    match rng.gen_range(0..3) {
        0 if g.edge_count() > 0 => {
            let e = g.edge(rng.gen_range(0..g.edge_count()));
            Some(ImmersionOp::DeleteEdge(e.u, e.v))
        }
        1 => Some(ImmersionOp::DeleteVertex(*vs.choose(rng)?)),
        _ => {
            let y = *vs.choose(rng)?;
            let nb = g.neighbors(y);
            if nb.len() < 2 {
                return None;
            }
            let pick: Vec<_> = nb.choose_multiple(rng, 2).copied().collect();
            Some(ImmersionOp::Lift {
                x: pick[0],
                y,
                z: pick[1],
            })
        }
    }
}

#[test]
fn criterion_06_immersion_monotonicity() {
    let cache = OracleCache::new(OracleOptions::default());
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED ^ 6);
    let mut failures = Vec::new();
    let mut trials = 0;
    let mut kinds = [0usize; 3];
    while trials < 500 {
        let n = rng.gen_range(2..=6);
        let p = rng.gen_range(0.2..0.9);
        let g = random_graph(n, p, &mut rng);
        let Some(op) = random_op(&g, &mut rng) else { continue };
        let h = apply_immersion(&g, op, ImmersionOptions::default()).unwrap();
        trials += 1;
        kinds[match op {
            ImmersionOp::DeleteEdge(..) => 0,
            ImmersionOp::DeleteVertex(_) => 1,
            ImmersionOp::Lift { .. } => 2,
        }] += 1;
        let (a, b) = (cache.widths(&g).unwrap(), cache.widths(&h).unwrap());
        for v in [WidthVariant::Stcw, WidthVariant::Tcw0] {
            if b.get(v).value > a.get(v).value {
                failures.push(format!(
                    "[{}] {op:?}: {v} {} -> {}",
                    edges_of(&g),
                    a.get(v).value,
                    b.get(v).value
                ));
            }
        }
    }
    report(
        6,
        &failures,
        &format!(
            "{trials} trials ({} edge deletions, {} vertex deletions, {} lifts)",
            kinds[0], kinds[1], kinds[2]
        ),
    );
}

#[test]
fn criterion_07_edge_sum_closure() {
    let cache = OracleCache::new(OracleOptions {
        size_limit: 8,
        ..OracleOptions::default()
    });
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED ^ 7);
    let mut failures = Vec::new();
    let mut trials = 0;
    let mut max_k = 0;
    while trials < 100 {
        let n1 = rng.gen_range(2..=6);
        let n2 = rng.gen_range(2..=(10 - n1).min(6));
        let g1 = random_connected_graph(n1, rng.gen_range(0..=3), &mut rng);
        let g2 = random_connected_graph(n2, rng.gen_range(0..=3), &mut rng);
        let v1 = rng.gen_range(0..n1);
        let k = g1.degree(v1);
        let matches: Vec<usize> = (0..n2).filter(|&v| g2.degree(v) == k).collect();
        let Some(&v2) = matches.choose(&mut rng) else { continue };
        let mut rhs = g2.neighbor_slots(v2);
        rhs.shuffle(&mut rng);
        let pairing: Vec<_> = g1.neighbor_slots(v1).into_iter().zip(rhs).collect();
        let sum = edge_sum(&g1, v1, &g2, v2, &pairing).unwrap();
        trials += 1;
        max_k = max_k.max(k);
        let (a, b, s) = (
            cache.widths(&g1).unwrap(),
            cache.widths(&g2).unwrap(),
            cache.widths(&sum.graph).unwrap(),
        );
        for v in [WidthVariant::Stcw, WidthVariant::Tcw0] {
            let bound = k.max(a.get(v).value).max(b.get(v).value);
            if s.get(v).value > bound {
                failures.push(format!(
                    "[{}] (+)_{k} [{}]: {v} {} > {bound}",
                    edges_of(&g1),
                    edges_of(&g2),
                    s.get(v).value
                ));
            }
        }
    }
    report(
        7,
        &failures,
        &format!("{trials} sums, k up to {max_k}, sums up to 8 vertices"),
    );
}

#[test]
fn criterion_08_degree_treewidth_link() {
    let mut failures = Vec::new();
    for e in corpus() {
        let g = &e.graph;
        let k = e.widths.tcw0.value;
        let tw = exact_treewidth(g).unwrap();
        if g.max_degree() > k * k {
            failures.push(format!("[{}] tcw0 {k}, max degree {}", edges_of(g), g.max_degree()));
        }
        if tw > 2 * k * k + 3 * k {
            failures.push(format!("[{}] tcw0 {k}, treewidth {tw}", edges_of(g)));
        }
        let t = e.widths.tcw.value;
        if tw > 2 * t * t + 3 * t {
            failures.push(format!("[{}] tcw {t}, treewidth {tw}", edges_of(g)));
        }
    }
    report(8, &failures, &format!("{} graphs", corpus().len()));
}

#[test]
fn criterion_09_edp_agreement() {
    let mut failures = Vec::new();
    let mut slowest = Duration::ZERO;
    let mut check = |g: &MultiGraph, w: &SpanningWitness, pairs: &[(usize, usize)], label: &str| {
        let truth = edp_bruteforce(g, pairs, DEFAULT_BRUTEFORCE_LIMIT).unwrap().is_some();
        let start = Instant::now();
        let dp = edp_solve_dp(g, w, pairs).unwrap();
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        if dp != truth || elapsed > Duration::from_secs(5) {
            failures.push(format!(
                "{label} [{}] pairs {pairs:?}: dp {dp} brute force {truth} in {elapsed:?}",
                edges_of(g)
            ));
        }
        truth
    };

    let c4 = MultiGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]);
    let w = SpanningWitness::from_graph(&c4, dfs_spanning_forest(&c4));
    let fixed = [
        (vec![(0, 2), (0, 2)], true),
        (vec![(0, 2), (1, 3)], false),
        (vec![(0, 1)], true),
    ];
    let mut fixed_ok = 0;
    for (pairs, expected) in &fixed {
        if check(&c4, &w, pairs, "fixed") == *expected {
            fixed_ok += 1;
        }
    }

    let opts = OracleOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED ^ 9);
    let (mut trials, mut yes, mut ghosted) = (0, 0, 0);
    while trials < 300 {
        let n = rng.gen_range(2..=7);
        let mut g = random_graph(n, rng.gen_range(0.2..0.8), &mut rng);
        if g.edge_count() > 0 && rng.gen_bool(0.3) {
            let e = g.edge(rng.gen_range(0..g.edge_count()));
            g.add_edge(e.u, e.v);
        }
        if g.edge_count() > DEFAULT_BRUTEFORCE_LIMIT {
            continue;
        }
        let pairs: Vec<(usize, usize)> = (0..rng.gen_range(1..=3))
            .map(|_| {
                let pick: Vec<usize> = (0..n).collect::<Vec<_>>().choose_multiple(&mut rng, 2).copied().collect();
                (pick[0], pick[1])
            })
            .collect();
        trials += 1;
        let w = SpanningWitness::from_graph(&g, dfs_spanning_forest(&g));
        if check(&g, &w, &pairs, "dfs") {
            yes += 1;
        }
        if n <= opts.size_limit {
            let d = exact_width(&g, WidthVariant::Stcw, &opts).unwrap().decomposition;
            let w = decomposition_to_witness(&g, &d).unwrap();
            if !w.ghost_edges().is_empty() || !w.ghost_vertices().is_empty() {
                ghosted += 1;
            }
            check(&g, &w, &pairs, "decomposition witness");
        }
    }
    if fixed_ok != fixed.len() {
        failures.push(format!("{fixed_ok}/{} fixed examples match", fixed.len()));
    }
    report(
        9,
        &failures,
        &format!(
            "{} fixed + {trials} random instances ({yes} yes, {ghosted} witnesses with ghosts), slowest dp {slowest:.2?}",
            fixed.len()
        ),
    );
}

#[test]
fn criterion_10_transformation_soundness() {
    let mut failures = Vec::new();
    let mut runs = 0;
    let mut nodes = 0;
    for e in corpus() {
        let g = &e.graph;
        let mut inputs: Vec<TreeCutDecomposition> = WidthVariant::ALL
            .iter()
            .map(|&v| e.widths.get(v).decomposition.clone())
            .collect();
        inputs.push(TreeCutDecomposition::single_node(g));
        inputs.push(TreeCutDecomposition::star_of_singletons(g));
        for d in &inputs {
            runs += 1;
            let before = width_report(d, g).unwrap();
            let out = make_very_nice(d, g).unwrap();
            let tag = format!("[{}] from {}", edges_of(g), d.to_json().replace('\n', ""));
            if let Err(v) = validate(&out, g) {
                failures.push(format!("{tag}: invalid output {v:?}"));
                continue;
            }
            if let Err(bad) = is_very_nice(&out, g) {
                failures.push(format!("{tag}: not very nice at {bad:?}"));
            }
            let after = width_report(&out, g).unwrap();
            if after.width > before.width || after.slim_width > before.slim_width {
                failures.push(format!(
                    "{tag}: width {} -> {}, slim {} -> {}",
                    before.width, after.width, before.slim_width, after.slim_width
                ));
            }
            let k = after.width;
            for s in &after.per_node {
                nodes += 1;
                if s.children_b2.len() + 3 * k + 2 < s.tor2 {
                    failures.push(format!(
                        "{tag}: node {} has |B2| {} < tor2 {} - 3*{k} - 2",
                        s.node,
                        s.children_b2.len(),
                        s.tor2
                    ));
                }
            }
        }
    }
    report(
        10,
        &failures,
        &format!("{runs} transformations, {nodes} output nodes checked"),
    );
}

#[test]
fn witness_value_matches_forest_value() {
    // a plain spanning forest witness agrees with the direct evaluation
    for e in corpus().iter().take(40) {
        let forest = dfs_spanning_forest(&e.graph);
        let w = SpanningWitness::from_graph(&e.graph, forest.clone());
        assert_eq!(w.ecw().unwrap(), ecw_value(&e.graph, &forest).unwrap());
    }
}
