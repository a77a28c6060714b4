//! Approximating slim tree-cut width from a tree-cut width approximation.
//!
//! A provider returns a decomposition of width at most `2ω` or reports that
//! `tcw(G) > ω`. Since `tcw ≤ stcw`, a "no" from the provider already
//! settles `stcw(G) > ω`. Otherwise the decomposition is made very nice and
//! every node's thin adhesion-two children are counted: more than
//! `6ω(ω+1)²` of them under one node also proves `stcw(G) > ω`, and if no
//! node exceeds that the slim width is at most `6(ω+1)³`.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use serde::Serialize;
use thiserror::Error;

use crate::decomp::{validate, DecompError, DecompView, TreeCutDecomposition};
use crate::graph::{write_edge_list, MultiGraph};
use crate::oracle::{self, OracleError, OracleOptions, WidthVariant};
use crate::transform::make_very_nice;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProviderAnswer {
    Decomposition(TreeCutDecomposition),
    /// `tcw(G) > ω`.
    No,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApproxError {
    #[error("omega must be positive")]
    ZeroOmega,
    #[error("oracle provider: {0}")]
    Oracle(#[from] OracleError),
    #[error("provider {provider} failed: {message}")]
    Provider { provider: String, message: String },
    #[error("provider returned an invalid decomposition: {0}")]
    InvalidDecomposition(DecompError),
    #[error("provider decomposition has width {width}, more than 2·omega = {limit}")]
    TooWide { width: usize, limit: usize },
}

/// Source of tree-cut decompositions of width at most `2ω`.
pub trait TcwProvider {
    fn name(&self) -> String;
    fn decompose(&self, g: &MultiGraph, omega: usize) -> Result<ProviderAnswer, ApproxError>;
}

/// Exact oracle: an optimal decomposition when `tcw ≤ 2ω`, otherwise "no".
#[derive(Debug, Clone, Default)]
pub struct OracleProvider {
    pub options: OracleOptions,
}

impl TcwProvider for OracleProvider {
    fn name(&self) -> String {
        "oracle".into()
    }

    fn decompose(&self, g: &MultiGraph, omega: usize) -> Result<ProviderAnswer, ApproxError> {
        let best = oracle::exact_width(g, WidthVariant::Tcw, &self.options)?;
        Ok(if best.value <= 2 * omega {
            ProviderAnswer::Decomposition(best.decomposition)
        } else {
            ProviderAnswer::No
        })
    }
}

/// External program. It receives the graph as an edge list on standard
/// input and `ω` as its only argument, and prints either `NO` or `DECOMP`
/// followed by decomposition JSON.
#[derive(Debug, Clone)]
pub struct ExecProvider {
    pub program: PathBuf,
}

impl TcwProvider for ExecProvider {
    fn name(&self) -> String {
        format!("exec:{}", self.program.display())
    }

    fn decompose(&self, g: &MultiGraph, omega: usize) -> Result<ProviderAnswer, ApproxError> {
        let fail = |message: String| ApproxError::Provider {
            provider: self.name(),
            message,
        };
        let mut child = Command::new(&self.program)
            .arg(omega.to_string())
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| fail(e.to_string()))?;
        child
            .stdin
            .take()
            .expect("piped")
            .write_all(write_edge_list(g).as_bytes())
            .map_err(|e| fail(e.to_string()))?;
        let out = child.wait_with_output().map_err(|e| fail(e.to_string()))?;
        if !out.status.success() {
            return Err(fail(format!("exited with {}", out.status)));
        }
        let text = String::from_utf8(out.stdout).map_err(|e| fail(e.to_string()))?;
        let text = text.trim_start();
        if text.trim_end() == "NO" {
            return Ok(ProviderAnswer::No);
        }
        let Some(json) = text.strip_prefix("DECOMP") else {
            return Err(fail("expected DECOMP or NO".into()));
        };
        let d = TreeCutDecomposition::from_json(json).map_err(|e| fail(e.to_string()))?;
        // the edge list is written compacted; map ids back
        let (_, map) = g.compact();
        let mut back = vec![usize::MAX; g.vertex_count()];
        for (old, new) in map.iter().enumerate() {
            if let Some(new) = *new {
                back[new] = old;
            }
        }
        Ok(ProviderAnswer::Decomposition(
            d.map_vertices(|v| back.get(v).copied().filter(|&x| x != usize::MAX)),
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoReason {
    /// The provider found `tcw(G) > ω`.
    ProviderNo,
    /// Some node has too many thin adhesion-two children.
    ThinChildren { node: usize, count: usize, threshold: usize },
}

/// Per-node record of the quantities the decision is based on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeCertificate {
    pub node: usize,
    pub adhesion: usize,
    pub bag_size: usize,
    pub children_a: usize,
    pub children_b2: usize,
    pub tor2: usize,
    /// `1 + |X_t| + |A_t| + |B_t^(2)|`, an upper bound on `tor2`.
    pub tor2_bound: usize,
    pub threshold: usize,
    pub within_threshold: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApproxOutcome {
    pub omega: usize,
    pub provider: String,
    /// `stcw(G) ≤ 6(ω+1)³` certified when true; `stcw(G) > ω` otherwise.
    pub yes: bool,
    pub reason: Option<NoReason>,
    pub threshold: usize,
    pub slim_width_bound: usize,
    pub provider_width: Option<usize>,
    pub slim_width: Option<usize>,
    #[serde(skip)]
    pub decomposition: Option<TreeCutDecomposition>,
    pub certificates: Vec<NodeCertificate>,
}

impl ApproxOutcome {
    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("serializable");
        if let Some(d) = &self.decomposition {
            v["decomposition"] =
                serde_json::from_str(&d.to_json()).expect("decomposition JSON is valid");
        }
        serde_json::to_string_pretty(&v).expect("serializable")
    }
}

/// `6ω(ω+1)²`.
pub fn thin_children_threshold(omega: usize) -> usize {
    6 * omega * (omega + 1) * (omega + 1)
}

/// `6(ω+1)³`.
pub fn slim_width_bound(omega: usize) -> usize {
    6 * (omega + 1).pow(3)
}

pub fn approximate_stcw(
    g: &MultiGraph,
    omega: usize,
    provider: &dyn TcwProvider,
) -> Result<ApproxOutcome, ApproxError> {
    if omega == 0 {
        return Err(ApproxError::ZeroOmega);
    }
    let threshold = thin_children_threshold(omega);
    let mut outcome = ApproxOutcome {
        omega,
        provider: provider.name(),
        yes: false,
        reason: Some(NoReason::ProviderNo),
        threshold,
        slim_width_bound: slim_width_bound(omega),
        provider_width: None,
        slim_width: None,
        decomposition: None,
        certificates: Vec::new(),
    };
    let d = match provider.decompose(g, omega)? {
        ProviderAnswer::No => return Ok(outcome),
        ProviderAnswer::Decomposition(d) => d,
    };
    validate(&d, g).map_err(|v| ApproxError::InvalidDecomposition(DecompError::Invalid(v)))?;
    let width = DecompView::new(&d, g)
        .map_err(ApproxError::InvalidDecomposition)?
        .report()
        .width;
    if width > 2 * omega {
        return Err(ApproxError::TooWide {
            width,
            limit: 2 * omega,
        });
    }
    outcome.provider_width = Some(width);

    let d = make_very_nice(&d, g).map_err(ApproxError::InvalidDecomposition)?;
    let view = DecompView::new(&d, g).map_err(ApproxError::InvalidDecomposition)?;
    let report = view.report();
    outcome.certificates = report
        .per_node
        .iter()
        .map(|s| NodeCertificate {
            node: s.node,
            adhesion: s.adhesion,
            bag_size: s.bag_size,
            children_a: s.children_a.len(),
            children_b2: s.children_b2.len(),
            tor2: s.tor2,
            tor2_bound: 1 + s.bag_size + s.children_a.len() + s.children_b2.len(),
            threshold,
            within_threshold: s.children_b2.len() <= threshold,
        })
        .collect();
    outcome.reason = outcome
        .certificates
        .iter()
        .find(|c| !c.within_threshold)
        .map(|c| NoReason::ThinChildren {
            node: c.node,
            count: c.children_b2,
            threshold,
        });
    outcome.yes = outcome.reason.is_none();
    outcome.slim_width = Some(report.slim_width);
    outcome.decomposition = Some(d);
    Ok(outcome)
}
