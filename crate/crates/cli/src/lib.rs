//! The `pdom` command line: solve instances, decompose graphs, generate
//! corpora, check witnesses, query the exhaustive oracle and run the scaling
//! benchmark.
//!
//! Every command writes its normal output to the given writer and reports
//! failure as a [`Failure`] carrying the process exit code, so the whole tool
//! can be driven in-process from tests.

#![forbid(unsafe_code)]

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use pdom_core::dp::{compute_states, gamma_p, reconstruct_witness};
use pdom_core::oracle::{oracle_dk, oracle_gamma_p, oracle_node_state};
use pdom_core::{
    decompose, generate, DecompTree, Error, Gamma, Graph, Node, NodeState, OpWeights, VertexSet,
};
use serde::{Deserialize, Serialize};

pub const EXIT_OK: i32 = 0;
/// Internal inconsistency, write failure, or a set that is not paired-dominating.
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_DH: i32 = 3;
pub const EXIT_ORACLE_GUARD: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "pdom",
    version,
    about = "Paired domination on distance-hereditary graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the paired-domination number of a graph or decomposition tree.
    Solve(SolveArgs),
    /// Build a decomposition tree for a graph.
    Decompose(DecomposeArgs),
    /// Generate a random decomposition tree and/or its graph.
    Gen(GenArgs),
    /// Check whether a vertex set is paired-dominating.
    Check(CheckArgs),
    /// Time count-mode solving on generated trees of the given sizes.
    Bench(BenchArgs),
    /// Exhaustive reference values for small graphs.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
#[group(id = "input", required = true, multiple = false)]
pub struct Input {
    /// Graph file: header "n m", then one "u v" line per edge.
    #[arg(long, group = "input")]
    pub graph: Option<PathBuf>,
    /// Decomposition tree JSON file.
    #[arg(long, group = "input")]
    pub tree: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: Input,
    /// Also compute a minimum paired-dominating set.
    #[arg(long)]
    pub witness: bool,
    /// Print a single-line JSON report instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Where to write the tree; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Number of leaves (vertices).
    #[arg(long)]
    pub n: usize,
    #[arg(long, env = "PDOM_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Relative weights "true_twin,false_twin,attach".
    #[arg(long, default_value = "1,1,1")]
    pub weights: OpWeights,
    /// Where to write the tree JSON.
    #[arg(long)]
    pub out_tree: Option<PathBuf>,
    /// Where to write the expanded graph.
    #[arg(long)]
    pub out_graph: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Comma-separated vertex ids, e.g. "2,3".
    #[arg(long, allow_hyphen_values = true)]
    pub set: String,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Comma-separated leaf counts.
    #[arg(long, value_delimiter = ',', default_values_t = [10_000usize, 100_000, 1_000_000])]
    pub sizes: Vec<usize>,
    #[arg(long, env = "PDOM_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Timed runs per size; the median is reported.
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,
    /// Print one JSON object per size instead of the table.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Twin set, comma-separated; prints the gamma_k table and flags.
    #[arg(long)]
    pub ts: Option<String>,
    /// Only the value for this k (requires --ts).
    #[arg(long, requires = "ts")]
    pub k: Option<usize>,
}

/// A command that did not succeed, with the exit code it maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotDistanceHereditary { .. } => EXIT_NOT_DH,
            Error::OracleGuard { .. } => EXIT_ORACLE_GUARD,
            Error::Inconsistent(_) | Error::NoWitness => EXIT_FAILURE,
            _ => EXIT_USAGE,
        };
        Failure::new(code, e.to_string())
    }
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure::new(EXIT_FAILURE, format!("write failed: {e}"))
}

type CmdResult = Result<(), Failure>;

/// Wall-clock seconds per phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseTimes {
    /// Reading input and, for graphs, recognition.
    pub build: f64,
    /// The bottom-up state pass.
    pub solve: f64,
    /// Witness reconstruction; zero when not requested.
    pub reconstruct: f64,
}

/// Result of one `solve` run, printed as a single JSON line under `--json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub instance: String,
    pub n: usize,
    pub m: u64,
    /// `null` when the graph has no paired-dominating set.
    pub gamma_p: Option<u32>,
    pub witness: Option<Vec<usize>>,
    pub seconds: PhaseTimes,
    /// Bytes held by the tree, the node states and (for graph input) the graph.
    pub peak_memory_bytes: u64,
}

/// One size of a benchmark run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    pub seed: u64,
    pub repeats: usize,
    pub gamma_p: Option<u32>,
    pub median_seconds: f64,
    pub ns_per_leaf: f64,
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_USAGE, format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> CmdResult {
    fs::write(path, contents).map_err(|e| {
        Failure::new(
            EXIT_FAILURE,
            format!("cannot write {}: {e}", path.display()),
        )
    })
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    Ok(Graph::parse(&read_file(path)?)?)
}

fn instance_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Edge count of the tree's graph: each `⊗` or `⊕` joins the two twin sets completely.
fn edge_count(t: &DecompTree, states: &[NodeState]) -> u64 {
    t.nodes()
        .iter()
        .map(|node| match *node {
            Node::Internal { op, left, right } if op.joins() => {
                states[left].ts_size as u64 * states[right].ts_size as u64
            }
            _ => 0,
        })
        .sum()
}

fn memory_estimate(t: &DecompTree, graph: Option<&Graph>) -> u64 {
    let per_node = std::mem::size_of::<Node>() + std::mem::size_of::<NodeState>();
    let graph_bytes = graph.map_or(0, |g| {
        g.n() * std::mem::size_of::<Vec<usize>>() + 2 * g.m() * std::mem::size_of::<usize>()
    });
    (t.len() * per_node + graph_bytes) as u64
}

/// Runs `solve` and returns the report without printing it.
pub fn solve_report(args: &SolveArgs) -> Result<RunReport, Failure> {
    let start = Instant::now();
    let (instance, tree, graph) = match (&args.input.graph, &args.input.tree) {
        (Some(path), None) => {
            let g = read_graph(path)?;
            (instance_name(path), decompose(&g)?, Some(g))
        }
        (None, Some(path)) => (
            instance_name(path),
            DecompTree::from_json(&read_file(path)?)?,
            None,
        ),
        _ => {
            return Err(Failure::new(
                EXIT_USAGE,
                "exactly one of --graph or --tree is required",
            ))
        }
    };
    let build = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let states = compute_states(&tree)?;
    let solve = start.elapsed().as_secs_f64();
    let gamma_p = states[tree.root()].gamma_p.finite();

    let start = Instant::now();
    let witness = match gamma_p {
        Some(_) if args.witness => Some(reconstruct_witness(&tree, &states)?.into_vec()),
        _ => None,
    };
    let reconstruct = start.elapsed().as_secs_f64();

    Ok(RunReport {
        instance,
        n: tree.leaf_count(),
        m: graph
            .as_ref()
            .map_or_else(|| edge_count(&tree, &states), |g| g.m() as u64),
        gamma_p,
        witness,
        seconds: PhaseTimes {
            build,
            solve,
            reconstruct,
        },
        peak_memory_bytes: memory_estimate(&tree, graph.as_ref()),
    })
}

fn or_none<T: ToString>(x: Option<T>) -> String {
    x.map_or_else(|| "none".to_string(), |v| v.to_string())
}

fn cmd_solve(args: &SolveArgs, out: &mut dyn Write) -> CmdResult {
    let report = solve_report(args)?;
    if args.json {
        let line = serde_json::to_string(&report)
            .map_err(|e| Failure::new(EXIT_FAILURE, e.to_string()))?;
        writeln!(out, "{line}").map_err(io_failure)?;
        return Ok(());
    }
    writeln!(out, "gamma_p {}", or_none(report.gamma_p)).map_err(io_failure)?;
    if args.witness {
        let w = report.witness.map(|w| VertexSet::from(w).to_string());
        writeln!(out, "witness {}", or_none(w)).map_err(io_failure)?;
    }
    Ok(())
}

fn cmd_decompose(args: &DecomposeArgs, out: &mut dyn Write) -> CmdResult {
    let tree = decompose(&read_graph(&args.graph)?)?;
    let json = tree.to_json();
    match &args.out {
        Some(path) => write_file(path, &format!("{json}\n")),
        None => writeln!(out, "{json}").map_err(io_failure),
    }
}

fn cmd_gen(args: &GenArgs, out: &mut dyn Write) -> CmdResult {
    let tree = generate(args.n, args.seed, args.weights)?;
    if let Some(path) = &args.out_graph {
        write_file(path, &tree.expand()?.graph.to_text())?;
    }
    let json = format!("{}\n", tree.to_json());
    match &args.out_tree {
        Some(path) => write_file(path, &json),
        None if args.out_graph.is_none() => out.write_all(json.as_bytes()).map_err(io_failure),
        None => Ok(()),
    }
}

fn cmd_check(args: &CheckArgs, out: &mut dyn Write) -> CmdResult {
    let g = read_graph(&args.graph)?;
    let set: VertexSet = args.set.parse()?;
    match g.paired_domination_failure(&set)? {
        None => writeln!(out, "paired-dominating").map_err(io_failure),
        Some(reason) => Err(Failure::new(
            EXIT_FAILURE,
            format!("not paired-dominating: {reason}"),
        )),
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let mid = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[mid]
    } else {
        (xs[mid - 1] + xs[mid]) / 2.0
    }
}

/// Generates one tree per size and times count-mode solving `repeats` times.
pub fn bench_rows(sizes: &[usize], seed: u64, repeats: usize) -> Result<Vec<BenchRow>, Failure> {
    if repeats == 0 {
        return Err(Failure::new(EXIT_USAGE, "--repeats must be at least 1"));
    }
    sizes
        .iter()
        .map(|&n| {
            let tree = generate(n, seed, OpWeights::default())?;
            let mut times = Vec::with_capacity(repeats);
            let mut gamma = Gamma::Infinite;
            for _ in 0..repeats {
                let start = Instant::now();
                gamma = gamma_p(&tree)?;
                times.push(start.elapsed().as_secs_f64());
            }
            let median_seconds = median(times);
            Ok(BenchRow {
                n,
                seed,
                repeats,
                gamma_p: gamma.finite(),
                median_seconds,
                ns_per_leaf: median_seconds * 1e9 / n as f64,
            })
        })
        .collect()
}

fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> CmdResult {
    let rows = bench_rows(&args.sizes, args.seed, args.repeats)?;
    if args.json {
        for row in &rows {
            let line = serde_json::to_string(row)
                .map_err(|e| Failure::new(EXIT_FAILURE, e.to_string()))?;
            writeln!(out, "{line}").map_err(io_failure)?;
        }
        return Ok(());
    }
    writeln!(
        out,
        "{:>10} {:>8} {:>8} {:>14} {:>12}",
        "n", "repeats", "gamma_p", "median_s", "ns_per_leaf"
    )
    .map_err(io_failure)?;
    for r in &rows {
        writeln!(
            out,
            "{:>10} {:>8} {:>8} {:>14.6} {:>12.2}",
            r.n,
            r.repeats,
            or_none(r.gamma_p),
            r.median_seconds,
            r.ns_per_leaf
        )
        .map_err(io_failure)?;
    }
    Ok(())
}

fn cmd_oracle(args: &OracleArgs, out: &mut dyn Write) -> CmdResult {
    let g = read_graph(&args.graph)?;
    let Some(ts) = &args.ts else {
        return writeln!(out, "gamma_p {}", or_none(oracle_gamma_p(&g)?.finite()))
            .map_err(io_failure);
    };
    let ts: VertexSet = ts.parse()?;
    if let Some(k) = args.k {
        return writeln!(out, "gamma_k {}", or_none(oracle_dk(&g, &ts, k)?)).map_err(io_failure);
    }
    let r = oracle_node_state(&g, &ts)?;
    let mut text = String::from("k gamma_k\n");
    for (k, v) in r.gamma_k.iter().enumerate() {
        text.push_str(&format!("{k} {}\n", or_none(*v)));
    }
    text.push_str(&format!(
        "min {}\nalpha {}\nbeta {}\nmty_ts {}\nmty_pr {}\ngamma_p {}\n",
        r.min,
        r.alpha,
        r.beta,
        r.mty_ts as u8,
        r.mty_pr as u8,
        or_none(r.gamma_p.finite())
    ));
    out.write_all(text.as_bytes()).map_err(io_failure)
}

/// Runs one parsed command.
pub fn run(cli: &Cli, out: &mut dyn Write) -> CmdResult {
    match &cli.command {
        Command::Solve(a) => cmd_solve(a, out),
        Command::Decompose(a) => cmd_decompose(a, out),
        Command::Gen(a) => cmd_gen(a, out),
        Command::Check(a) => cmd_check(a, out),
        Command::Bench(a) => cmd_bench(a, out),
        Command::Oracle(a) => cmd_oracle(a, out),
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Usage errors print clap's message and return 2.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match run(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "pdom: {}", f.message);
            f.code
        }
    }
}
