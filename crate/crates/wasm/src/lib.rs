//! Browser bindings: three operations returning JSON strings, used by the
//! page in `www/`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use cutwidth::approx::{approximate_stcw, OracleProvider};
use cutwidth::ecw::{dfs_spanning_forest, exact_ecw, local_feedback_sets};
use cutwidth::graph::{make_family, parse_graph, Family};
use cutwidth::oracle::{exact_widths, OracleOptions};
use cutwidth::MultiGraph;

/// Spanning forests examined before the exact edge-cut width is skipped.
pub const EXACT_BUDGET: u64 = 200_000;
/// Largest graph handed to the exact oracle in the browser.
pub const ORACLE_LIMIT: usize = 9;

fn graph_value(g: &MultiGraph) -> Value {
    json!({
        "n": g.capacity(),
        "edges": g.edges().iter().map(|e| [e.u, e.v]).collect::<Vec<_>>(),
    })
}

fn decomp_value(d: &cutwidth::TreeCutDecomposition) -> Value {
    serde_json::from_str(&d.to_json()).expect("decomposition JSON is valid")
}

/// A family member with its distinguished (or depth-first) spanning tree,
/// the local feedback set size at every vertex and, when the enumeration
/// fits, the exact edge-cut width.
pub fn family_report(family: &str, r: usize) -> Result<String, String> {
    let family: Family = family.parse()?;
    let fg = make_family(family, r).map_err(|e| e.to_string())?;
    let g = fg.graph;
    let tree = fg.spanning_tree.unwrap_or_else(|| dfs_spanning_forest(&g));
    let local: Vec<usize> = local_feedback_sets(&g, &tree)
        .map_err(|e| e.to_string())?
        .iter()
        .map(Vec::len)
        .collect();
    let exact = exact_ecw(&g, EXACT_BUDGET).ok().map(|o| o.value);
    Ok(json!({
        "graph": graph_value(&g),
        "tree": tree,
        "local": local,
        "tree_ecw": 1 + local.iter().max().copied().unwrap_or(0),
        "exact_ecw": exact,
    })
    .to_string())
}

/// Tree-cut width, slim tree-cut width and 0-tree-cut width with one
/// optimal decomposition each.
pub fn widths_report(graph: &str) -> Result<String, String> {
    let g = parse_graph(graph).map_err(|e| e.to_string())?;
    let opts = OracleOptions {
        size_limit: ORACLE_LIMIT,
        ..OracleOptions::default()
    };
    let w = exact_widths(&g, &opts).map_err(|e| e.to_string())?;
    let entry = |x: &cutwidth::oracle::ExactWidth| {
        json!({ "value": x.value, "decomposition": decomp_value(&x.decomposition) })
    };
    Ok(json!({
        "graph": graph_value(&g),
        "tcw": entry(&w.tcw),
        "stcw": entry(&w.stcw),
        "tcw0": entry(&w.tcw0),
    })
    .to_string())
}

/// The slim tree-cut width approximation with the exact oracle as provider.
pub fn approx_report(graph: &str, omega: usize) -> Result<String, String> {
    let g = parse_graph(graph).map_err(|e| e.to_string())?;
    let provider = OracleProvider {
        options: OracleOptions {
            size_limit: ORACLE_LIMIT,
            ..OracleOptions::default()
        },
    };
    let outcome = approximate_stcw(&g, omega, &provider).map_err(|e| e.to_string())?;
    let mut v: Value = serde_json::from_str(&outcome.to_json()).expect("outcome JSON is valid");
    v["graph"] = graph_value(&g);
    Ok(v.to_string())
}

#[wasm_bindgen]
pub fn explore_family(family: &str, r: usize) -> Result<String, JsError> {
    family_report(family, r).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn oracle_widths(graph: &str) -> Result<String, JsError> {
    widths_report(graph).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn approximate(graph: &str, omega: usize) -> Result<String, JsError> {
    approx_report(graph, omega).map_err(|e| JsError::new(&e))
}
