//! Command-line front end. [`run`] takes the arguments and output streams
//! and returns the exit status, so the whole surface is testable in-process.
//!
//! Exit status: 0 success, 1 negative decision, 2 input or validation
//! error, 3 budget or size limit exceeded.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::approx::{approximate_stcw, ApproxError, ExecProvider, OracleProvider, TcwProvider};
use crate::corpus::DEFAULT_SEED;
use crate::decomp::{is_nice, is_very_nice, validate, DecompError, DecompView, TreeCutDecomposition};
use crate::ecw::{dfs_spanning_forest, exact_ecw, EcwError, SpanningWitness, DEFAULT_ENUMERATION_BUDGET};
use crate::edp::{edp_bruteforce, edp_solve_dp, parse_pairs, EdpError, DEFAULT_BRUTEFORCE_LIMIT};
use crate::graph::{make_family, parse_graph, random_graph, to_dot, write_edge_list, DotStyle, Family, GraphError};
use crate::oracle::{
    exact_width, Engine, ExactWidth, OracleError, OracleOptions, WidthVariant, DEFAULT_EMPTY_BUDGET,
    DEFAULT_SIZE_LIMIT,
};
use crate::transform::{decomposition_to_witness, witness_to_decomposition};
use crate::MultiGraph;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "cutwidth", version, about = "Tree-cut decompositions and edge-cut width witnesses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a family member or a seeded random graph as an edge list.
    Gen(GenArgs),
    /// Width report of a decomposition.
    Widths {
        #[arg(long)]
        decomp: PathBuf,
        graph: PathBuf,
    },
    /// Minimum edge-cut width over all maximal spanning forests.
    EcwExact {
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        budget: u64,
        graph: PathBuf,
    },
    /// Exact widths with an optimal decomposition.
    Oracle {
        /// tcw, stcw, tcw0 or all.
        #[arg(long, default_value = "all")]
        variant: String,
        /// Also write the optimal decomposition of a single variant here.
        #[arg(long)]
        decomp_out: Option<PathBuf>,
        #[command(flatten)]
        oracle: OracleArgs,
        graph: PathBuf,
    },
    /// Supergraph and spanning tree witness built from a decomposition.
    ToWitness {
        #[arg(long)]
        decomp: PathBuf,
        graph: PathBuf,
    },
    /// Decomposition read off a witness.
    ToDecomp {
        #[arg(long)]
        witness: PathBuf,
    },
    /// Check a decomposition against a graph.
    VerifyDecomp {
        #[arg(long)]
        decomp: PathBuf,
        graph: PathBuf,
    },
    /// Check a witness against a graph.
    VerifyWitness {
        #[arg(long)]
        witness: PathBuf,
        graph: PathBuf,
    },
    /// Decide slim tree-cut width up to the cubic approximation factor.
    Approx {
        #[arg(long)]
        omega: usize,
        /// `oracle` or `exec:<path>`.
        #[arg(long, default_value = "oracle")]
        provider: String,
        #[command(flatten)]
        oracle: OracleArgs,
        graph: PathBuf,
    },
    /// Edge-disjoint paths by dynamic programming over a witness.
    Edp {
        /// Terminal pairs, e.g. `0-2,1-3`.
        #[arg(long)]
        pairs: String,
        /// Witness to run on; a depth-first spanning forest otherwise.
        #[arg(long)]
        witness: Option<PathBuf>,
        graph: PathBuf,
    },
    /// Graphviz rendering of a graph or of a witness.
    ExportDot {
        #[arg(long)]
        witness: Option<PathBuf>,
        graph: PathBuf,
    },
}

#[derive(Debug, Args)]
struct GenArgs {
    /// star, windmill, wall or ladder.
    #[arg(long, conflicts_with = "n")]
    family: Option<Family>,
    #[arg(long, requires = "family")]
    r: Option<usize>,
    /// Vertex count of a random graph.
    #[arg(long, required_unless_present = "family")]
    n: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Print the family's distinguished spanning tree as a witness.
    #[arg(long, requires = "family")]
    tree: bool,
}

#[derive(Debug, Args)]
struct OracleArgs {
    /// Largest vertex count the oracle accepts.
    #[arg(long, default_value_t = DEFAULT_SIZE_LIMIT)]
    limit: usize,
    /// Empty nodes allowed by the enumeration engine.
    #[arg(long, default_value_t = DEFAULT_EMPTY_BUDGET)]
    empty_budget: usize,
    #[arg(long, default_value_t = Engine::SubsetDp)]
    engine: Engine,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
}

impl OracleArgs {
    fn options(&self) -> OracleOptions {
        OracleOptions {
            size_limit: self.limit,
            engine: self.engine,
            empty_budget: self.empty_budget,
            jobs: self.jobs,
        }
    }
}

/// A failed command with its exit status.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.to_string(),
        }
    }

    fn limit(message: impl ToString) -> Self {
        Failure {
            code: EXIT_LIMIT,
            message: message.to_string(),
        }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        Failure::input(e)
    }
}

impl From<DecompError> for Failure {
    fn from(e: DecompError) -> Self {
        Failure::input(e)
    }
}

impl From<EcwError> for Failure {
    fn from(e: EcwError) -> Self {
        match e {
            EcwError::Budget(_) => Failure::limit(e),
            _ => Failure::input(e),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        Failure::limit(e)
    }
}

impl From<EdpError> for Failure {
    fn from(e: EdpError) -> Self {
        match e {
            EdpError::TooManyEdges { .. } | EdpError::TooManyPairs(_) => Failure::limit(e),
            _ => Failure::input(e),
        }
    }
}

impl From<ApproxError> for Failure {
    fn from(e: ApproxError) -> Self {
        match e {
            ApproxError::Oracle(_) => Failure::limit(e),
            _ => Failure::input(e),
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_INPUT
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::input(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<MultiGraph, Failure> {
    Ok(parse_graph(&read_text(path)?)?)
}

fn read_decomp(path: &Path, g: &MultiGraph) -> Result<TreeCutDecomposition, Failure> {
    let d = TreeCutDecomposition::from_json(&read_text(path)?)?;
    validate(&d, g).map_err(DecompError::Invalid)?;
    Ok(d)
}

fn read_witness(path: &Path) -> Result<SpanningWitness, Failure> {
    Ok(SpanningWitness::from_json(&read_text(path)?)?)
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())
        .and_then(|_| if text.ends_with('\n') { Ok(()) } else { out.write_all(b"\n") })
        .map_err(|e| Failure::input(format!("write failed: {e}")))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn decomp_value(d: &TreeCutDecomposition) -> Value {
    serde_json::from_str(&d.to_json()).expect("decomposition JSON is valid")
}

fn width_value(w: &ExactWidth) -> Value {
    json!({
        "variant": w.variant.to_string(),
        "value": w.value,
        "meta": w.meta,
        "decomposition": decomp_value(&w.decomposition),
    })
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Gen(args) => {
            let text = match args.family {
                Some(family) => {
                    let r = args.r.ok_or_else(|| Failure::input("--family needs --r"))?;
                    let fg = make_family(family, r)?;
                    if args.tree {
                        let tree = fg
                            .spanning_tree
                            .ok_or_else(|| Failure::input(format!("{family} has no distinguished tree")))?;
                        SpanningWitness::from_graph(&fg.graph, tree).to_json()
                    } else {
                        write_edge_list(&fg.graph)
                    }
                }
                None => {
                    let n = args.n.expect("clap requires --n without --family");
                    if !(0.0..=1.0).contains(&args.p) {
                        return Err(Failure::input("--p must lie in [0, 1]"));
                    }
                    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
                    write_edge_list(&random_graph(n, args.p, &mut rng))
                }
            };
            emit(out, &text)?;
        }
        Command::Widths { decomp, graph } => {
            let g = read_graph(&graph)?;
            let d = read_decomp(&decomp, &g)?;
            let report = DecompView::new(&d, &g)?.report();
            emit(out, &serde_json::to_string_pretty(&report).expect("serializable"))?;
        }
        Command::EcwExact { budget, graph } => {
            let g = read_graph(&graph)?;
            let opt = exact_ecw(&g, budget)?;
            let witness: Value =
                serde_json::from_str(&SpanningWitness::from_graph(&g, opt.forest).to_json()).expect("valid JSON");
            emit(
                out,
                &pretty(&json!({
                    "ecw": opt.value,
                    "forests_examined": opt.forests_examined,
                    "witness": witness,
                })),
            )?;
        }
        Command::Oracle {
            variant,
            decomp_out,
            oracle,
            graph,
        } => {
            let g = read_graph(&graph)?;
            let opts = oracle.options();
            let value = if variant == "all" {
                if decomp_out.is_some() {
                    return Err(Failure::input("--decomp-out needs a single --variant"));
                }
                let mut all = serde_json::Map::new();
                for v in WidthVariant::ALL {
                    all.insert(v.to_string(), width_value(&exact_width(&g, v, &opts)?));
                }
                Value::Object(all)
            } else {
                let v: WidthVariant = variant.parse().map_err(Failure::input)?;
                let best = exact_width(&g, v, &opts)?;
                if let Some(path) = decomp_out {
                    std::fs::write(&path, best.decomposition.to_json() + "\n")
                        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
                }
                width_value(&best)
            };
            emit(out, &pretty(&value))?;
        }
        Command::ToWitness { decomp, graph } => {
            let g = read_graph(&graph)?;
            let d = read_decomp(&decomp, &g)?;
            emit(out, &decomposition_to_witness(&g, &d)?.to_json())?;
        }
        Command::ToDecomp { witness } => {
            let w = read_witness(&witness)?;
            emit(out, &witness_to_decomposition(&w)?.to_json())?;
        }
        Command::VerifyDecomp { decomp, graph } => {
            let g = read_graph(&graph)?;
            let d = TreeCutDecomposition::from_json(&read_text(&decomp)?)?;
            if let Err(violations) = validate(&d, &g) {
                emit(out, &pretty(&json!({ "valid": false, "violations": violations })))?;
                return Ok(EXIT_INPUT);
            }
            let report = DecompView::new(&d, &g)?.report();
            let nice = is_nice(&d, &g);
            let very_nice = is_very_nice(&d, &g);
            emit(
                out,
                &pretty(&json!({
                    "valid": true,
                    "width": report.width,
                    "slim_width": report.slim_width,
                    "zero_width": report.zero_width,
                    "nice": nice.is_ok(),
                    "very_nice": very_nice.is_ok(),
                    "not_nice_at": nice.err().unwrap_or_default(),
                    "not_very_nice_at": very_nice.err().unwrap_or_default(),
                })),
            )?;
        }
        Command::VerifyWitness { witness, graph } => {
            let g = read_graph(&graph)?;
            let w = read_witness(&witness)?;
            if let Err(e) = w.validate_for(&g) {
                emit(out, &pretty(&json!({ "valid": false, "error": e.to_string() })))?;
                return Ok(EXIT_INPUT);
            }
            emit(
                out,
                &pretty(&json!({
                    "valid": true,
                    "ecw": w.ecw()?,
                    "ghost_vertices": w.ghost_vertices(),
                    "ghost_edges": w.ghost_edges(),
                })),
            )?;
        }
        Command::Approx {
            omega,
            provider,
            oracle,
            graph,
        } => {
            let g = read_graph(&graph)?;
            let provider: Box<dyn TcwProvider> = match provider.as_str() {
                "oracle" => Box::new(OracleProvider {
                    options: oracle.options(),
                }),
                other => match other.strip_prefix("exec:") {
                    Some(path) => Box::new(ExecProvider {
                        program: PathBuf::from(path),
                    }),
                    None => return Err(Failure::input(format!("unknown provider `{other}`"))),
                },
            };
            let outcome = approximate_stcw(&g, omega, provider.as_ref())?;
            emit(out, &outcome.to_json())?;
            return Ok(if outcome.yes { EXIT_OK } else { EXIT_NO });
        }
        Command::Edp { pairs, witness, graph } => {
            let g = read_graph(&graph)?;
            let pairs = parse_pairs(&pairs).map_err(Failure::input)?;
            let w = match witness {
                Some(path) => read_witness(&path)?,
                None => SpanningWitness::from_graph(&g, dfs_spanning_forest(&g)),
            };
            let yes = edp_solve_dp(&g, &w, &pairs)?;
            emit(out, if yes { "yes" } else { "no" })?;
            if yes && g.edge_count() <= DEFAULT_BRUTEFORCE_LIMIT {
                let paths = edp_bruteforce(&g, &pairs, DEFAULT_BRUTEFORCE_LIMIT)?
                    .ok_or_else(|| Failure::input("brute force found no path system"))?;
                for p in paths {
                    let (s, t) = pairs[p.pair];
                    let walk: Vec<String> = p.vertices.iter().map(|v| v.to_string()).collect();
                    emit(out, &format!("{s}-{t}: {}", walk.join(" ")))?;
                }
            }
            return Ok(if yes { EXIT_OK } else { EXIT_NO });
        }
        Command::ExportDot { witness, graph } => {
            let g = read_graph(&graph)?;
            let dot = match witness {
                Some(path) => {
                    let w = read_witness(&path)?;
                    w.validate_for(&g)?;
                    let style = DotStyle {
                        tree_edges: w.forest().to_vec(),
                        ghost_vertices: w.ghost_vertices(),
                        ghost_edges: w.ghost_edges(),
                    };
                    to_dot(w.host(), &style)
                }
                None => to_dot(&g, &DotStyle::default()),
            };
            emit(out, &dot)?;
        }
    }
    Ok(EXIT_OK)
}
