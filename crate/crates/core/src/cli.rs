//! `texplore` command-line front end.
//!
//! Exit codes: 0 on success, 1 when an algorithm fails or a check rejects
//! its input, 2 on usage, format or I/O errors. Every run that writes files
//! also writes `<out>.manifest.json` describing the invocation.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::foremost::{verify_delta_connectivity, DeltaMode};
use crate::gen::{
    gen_blocking_front, gen_random_deficient, Connectivity, GenSpec, Generated, TreeShape,
};
use crate::graph::TemporalGraph;
use crate::io::{parse_temporal_graph, parse_tree, serialize_temporal_graph, serialize_tree};
use crate::oracle::{optimal_exploration_time, OptimalExploration, OracleLimits};
use crate::scheduler::{
    explore, lifetime_bound, verify_schedule, ExploreOptions, Schedule, TupleStrategy,
};
use crate::treefind::find_good_tree;

#[derive(Parser, Debug)]
#[command(
    name = "texplore",
    version,
    about = "Exploration schedules for k-edge-deficient temporal graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a deficient instance with its witness tree.
    Gen(GenArgs),
    /// Compute an exploration schedule.
    Explore(ExploreArgs),
    /// Check a schedule against a graph.
    Verify(VerifyArgs),
    /// Recover a spanning tree from snapshot absence counts.
    Tree(TreeArgs),
    /// Exact minimum exploration length (small instances only).
    Oracle(OracleArgs),
    /// Check Δ-temporal connectivity.
    CheckDelta(CheckDeltaArgs),
    /// Generate and explore a batch of instances, writing a CSV.
    Bench(BenchArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Generator {
    Random,
    Blocking,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Shape {
    Path,
    Star,
    Random,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ConnectivityArg {
    PerSnapshot,
    DeltaOnly,
    None,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum StrategyArg {
    LasVegas,
    Enumerate,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, short = 'L')]
    lifetime: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "random")]
    generator: Generator,
    #[arg(long, value_enum, default_value = "random")]
    shape: Shape,
    #[arg(long, value_enum, default_value = "per-snapshot")]
    connectivity: ConnectivityArg,
    /// Period for delta-only connectivity.
    #[arg(long)]
    delta: Option<usize>,
    #[arg(long, default_value_t = 0.0)]
    extra_rate: f64,
    /// Graph output; the tree goes to `<out>.tree` unless --tree-out is set.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    tree_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExploreArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    k: usize,
    /// Defaults to n - 1.
    #[arg(long)]
    delta: Option<usize>,
    #[arg(long, default_value_t = 0)]
    start: usize,
    /// Known witness tree; without it the tree is recovered first.
    #[arg(long)]
    tree: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "las-vegas")]
    strategy: StrategyArg,
    #[arg(long, default_value_t = TupleStrategy::DEFAULT_MAX_ATTEMPTS)]
    max_attempts: usize,
    #[arg(long, default_value_t = TupleStrategy::DEFAULT_CAP)]
    cap: u128,
    #[arg(long, default_value_t = 0)]
    root: usize,
    #[arg(long)]
    out: PathBuf,
    /// Write per-epoch roundabout dumps here.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Verify Δ-temporal connectivity exhaustively before exploring.
    #[arg(long)]
    check_delta: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    schedule: PathBuf,
    #[arg(long, default_value_t = 0)]
    start: usize,
}

#[derive(Args, Debug)]
struct TreeArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    k: usize,
    /// Half the prefix length; defaults to τ(n, 2k, Δ), clamped to L / 2.
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    delta: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = 0)]
    start: usize,
    #[arg(long, default_value_t = OracleLimits::default().max_vertices)]
    max_vertices: usize,
    #[arg(long, default_value_t = OracleLimits::default().max_lifetime)]
    max_lifetime: usize,
}

#[derive(Args, Debug)]
struct CheckDeltaArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    delta: usize,
    /// Check this many random windows instead of all of them.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Lines of `n k delta seed`; `#` starts a comment.
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "random")]
    generator: Generator,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct RunManifest {
    subcommand: &'static str,
    inputs: BTreeMap<&'static str, String>,
    parameters: Value,
    outputs: BTreeMap<&'static str, String>,
    stats: Value,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_algorithmic() { 1 } else { 2 },
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn rejected(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

type CliResult<T = ()> = std::result::Result<T, Failure>;

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Gen(a) => run_gen(a),
        Command::Explore(a) => run_explore(a),
        Command::Verify(a) => run_verify(a),
        Command::Tree(a) => run_tree(a),
        Command::Oracle(a) => run_oracle(a),
        Command::CheckDelta(a) => run_check_delta(a),
        Command::Bench(a) => run_bench(a),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> CliResult {
    fs::write(path, contents).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> CliResult<TemporalGraph> {
    parse_temporal_graph(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn display(path: &Path) -> String {
    path.display().to_string()
}

fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn write_manifest(out: &Path, manifest: &RunManifest) -> CliResult {
    let text = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    write(&sidecar(out, ".manifest.json"), &(text + "\n"))
}

fn run_gen(a: GenArgs) -> CliResult {
    let generated: Generated = match a.generator {
        Generator::Random => {
            let connectivity = match a.connectivity {
                ConnectivityArg::PerSnapshot => Connectivity::PerSnapshot,
                ConnectivityArg::None => Connectivity::None,
                ConnectivityArg::DeltaOnly => Connectivity::DeltaOnly(
                    a.delta
                        .ok_or_else(|| usage("--connectivity delta-only needs --delta"))?,
                ),
            };
            let spec = GenSpec {
                n: a.n,
                lifetime: a.lifetime,
                k: a.k,
                seed: a.seed,
                tree_shape: match a.shape {
                    Shape::Path => TreeShape::Path,
                    Shape::Star => TreeShape::Star,
                    Shape::Random => TreeShape::Random,
                },
                connectivity,
                extra_edge_rate: a.extra_rate,
            };
            gen_random_deficient(&spec)?
        }
        Generator::Blocking => gen_blocking_front(a.n, a.k, a.lifetime, a.seed)?,
    };
    let tree_out = a
        .tree_out
        .clone()
        .unwrap_or_else(|| sidecar(&a.out, ".tree"));
    write(&a.out, &serialize_temporal_graph(&generated.graph))?;
    write(&tree_out, &serialize_tree(&generated.witness))?;
    let parameters = json!({
        "generator": a.generator,
        "n": a.n,
        "lifetime": a.lifetime,
        "k": a.k,
        "seed": a.seed,
        "shape": format!("{:?}", a.shape).to_lowercase(),
        "connectivity": format!("{:?}", a.connectivity).to_lowercase(),
        "delta": a.delta,
        "extraRate": a.extra_rate,
    });
    write_manifest(
        &a.out,
        &RunManifest {
            subcommand: "gen",
            inputs: BTreeMap::new(),
            parameters,
            outputs: BTreeMap::from([("graph", display(&a.out)), ("tree", display(&tree_out))]),
            stats: json!({ "fallbacks": generated.fallbacks }),
        },
    )
}

fn run_explore(a: ExploreArgs) -> CliResult {
    let graph = load_graph(&a.graph)?;
    let n = graph.vertex_count();
    let delta = match a.delta {
        Some(d) => d,
        None => {
            let d = n.saturating_sub(1).max(1);
            if !a.check_delta {
                log::warn!("Δ defaults to n - 1 = {d}; pass --check-delta to verify it");
            }
            d
        }
    };
    if a.check_delta {
        let verdict = verify_delta_connectivity(&graph, delta, DeltaMode::Exhaustive)?;
        if let Some(v) = verdict.violation {
            return Err(rejected(format!(
                "not {delta}-temporally connected: no walk from {} to {} in the window starting at {}",
                v.from, v.to, v.window_start
            )));
        }
    }
    let mut opts = ExploreOptions::new(a.k, delta, a.start).with_strategy(match a.strategy {
        StrategyArg::LasVegas => TupleStrategy::LasVegas {
            seed: a.seed,
            max_attempts: a.max_attempts,
        },
        StrategyArg::Enumerate => TupleStrategy::Enumerate { cap: a.cap },
    });
    opts.root = a.root;
    if let Some(path) = &a.tree {
        let tree =
            parse_tree(&read(path)?, n).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        opts = opts.with_tree(tree);
    }

    let ex = explore(&graph, &opts)?;
    let report = verify_schedule(&graph, a.start, &ex.schedule);
    if let Some(v) = report.violation {
        return Err(rejected(format!("internal check failed: {v}")));
    }
    write(&a.out, &ex.schedule.to_text())?;
    let mut outputs = BTreeMap::from([("schedule", display(&a.out))]);
    if let Some(path) = &a.trace {
        let mut text = String::new();
        for (j, trace) in ex.traces.iter().enumerate() {
            text.push_str(&format!("# epoch {}\n", j + 1));
            text.push_str(&trace.dump());
        }
        write(path, &text)?;
        outputs.insert("trace", display(path));
    }
    let stats = serde_json::to_value(&ex.stats).expect("stats serialize");
    println!(
        "{}",
        serde_json::to_string(&stats).expect("stats serialize")
    );

    let mut inputs = BTreeMap::from([("graph", display(&a.graph))]);
    if let Some(path) = &a.tree {
        inputs.insert("tree", display(path));
    }
    write_manifest(
        &a.out,
        &RunManifest {
            subcommand: "explore",
            inputs,
            parameters: json!({
                "k": a.k,
                "kUsed": ex.k_used,
                "delta": delta,
                "start": a.start,
                "root": a.root,
                "seed": a.seed,
                "strategy": a.strategy,
                "maxAttempts": a.max_attempts,
                "cap": a.cap.to_string(),
                "checkDelta": a.check_delta,
            }),
            outputs,
            stats,
        },
    )
}

fn run_verify(a: VerifyArgs) -> CliResult {
    let graph = load_graph(&a.graph)?;
    let schedule = Schedule::parse(&read(&a.schedule)?)
        .map_err(|e| usage(format!("{}: {e}", a.schedule.display())))?;
    let report = verify_schedule(&graph, a.start, &schedule);
    match report.violation {
        None => {
            println!(
                "valid: {} moves, all {} vertices visited",
                schedule.move_count(),
                report.visited
            );
            Ok(())
        }
        Some(v) => Err(rejected(format!(
            "invalid: {v} ({}/{} vertices visited)",
            report.visited,
            graph.vertex_count()
        ))),
    }
}

fn run_tree(a: TreeArgs) -> CliResult {
    let graph = load_graph(&a.graph)?;
    let n = graph.vertex_count();
    let k = a.k.max(1);
    let delta = a.delta.unwrap_or(n.saturating_sub(1)).max(1);
    let q = match a.q {
        Some(q) => q,
        None => {
            let q = lifetime_bound(n, 2 * k, delta);
            if 2 * q > graph.lifetime() {
                log::warn!(
                    "lifetime {} is below 2q = {}; using q = {}",
                    graph.lifetime(),
                    2 * q,
                    graph.lifetime() / 2
                );
                graph.lifetime() / 2
            } else {
                q
            }
        }
    };
    let good = find_good_tree(&graph, k, q)?;
    write(&a.out, &serialize_tree(&good.tree))?;
    let stats = json!({
        "q": q,
        "goodSnapshots": good.good_snapshots,
        "weight": good.weights.total(good.tree.edges()),
        "deficiencies": good.deficiencies,
    });
    println!(
        "{}",
        serde_json::to_string(&stats).expect("stats serialize")
    );
    write_manifest(
        &a.out,
        &RunManifest {
            subcommand: "tree",
            inputs: BTreeMap::from([("graph", display(&a.graph))]),
            parameters: json!({ "k": a.k, "q": q, "delta": delta }),
            outputs: BTreeMap::from([("tree", display(&a.out))]),
            stats,
        },
    )
}

fn run_oracle(a: OracleArgs) -> CliResult {
    let graph = load_graph(&a.graph)?;
    let limits = OracleLimits {
        max_vertices: a.max_vertices,
        max_lifetime: a.max_lifetime,
    };
    match optimal_exploration_time(&graph, a.start, limits)? {
        OptimalExploration::Feasible { length, completion } => {
            println!("{length}");
            eprintln!("earliest completion at step {completion}");
            Ok(())
        }
        OptimalExploration::Infeasible => Err(rejected("no exploring walk within the lifetime")),
    }
}

fn run_check_delta(a: CheckDeltaArgs) -> CliResult {
    let graph = load_graph(&a.graph)?;
    let mode = match a.samples {
        Some(count) => DeltaMode::Sampled {
            count,
            seed: a.seed,
        },
        None => DeltaMode::Exhaustive,
    };
    let verdict = verify_delta_connectivity(&graph, a.delta, mode)?;
    println!(
        "{}",
        json!({
            "connected": verdict.connected,
            "windowsChecked": verdict.windows_checked,
            "violation": verdict.violation.map(|v| json!({
                "windowStart": v.window_start, "from": v.from, "to": v.to
            })),
        })
    );
    if verdict.connected {
        Ok(())
    } else {
        Err(rejected(format!("not {}-temporally connected", a.delta)))
    }
}

struct BenchRow {
    n: usize,
    k: usize,
    delta: usize,
    seed: u64,
}

fn parse_bench_manifest(text: &str) -> CliResult<Vec<BenchRow>> {
    crate::io::content_lines(text)
        .map(|(line, content)| {
            let fields: Vec<&str> = content.split_whitespace().collect();
            let bad = || {
                usage(format!(
                    "bench manifest line {line}: expected `n k delta seed`"
                ))
            };
            if fields.len() != 4 {
                return Err(bad());
            }
            let num = |s: &str| s.parse::<u64>().map_err(|_| bad());
            Ok(BenchRow {
                n: num(fields[0])? as usize,
                k: num(fields[1])? as usize,
                delta: num(fields[2])? as usize,
                seed: num(fields[3])?,
            })
        })
        .collect()
}

fn bench_one(row: &BenchRow, generator: Generator) -> Result<Vec<String>, Error> {
    let clock = Instant::now();
    let k = row.k.max(1);
    let bound = lifetime_bound(row.n, k, row.delta);
    let generated = match generator {
        Generator::Random => gen_random_deficient(&GenSpec::new(row.n, bound, row.k, row.seed))?,
        Generator::Blocking => gen_blocking_front(row.n, row.k, bound, row.seed)?,
    };
    let opts = ExploreOptions::new(row.k, row.delta, 0)
        .with_tree(generated.witness)
        .with_strategy(TupleStrategy::las_vegas(row.seed));
    let ex = explore(&generated.graph, &opts)?;
    let s = &ex.stats;
    Ok(vec![
        s.rho.to_string(),
        s.t.to_string(),
        s.schedule_span.to_string(),
        s.schedule_length.to_string(),
        bound.to_string(),
        s.attempts.to_string(),
        clock.elapsed().as_millis().to_string(),
    ])
}

fn run_bench(a: BenchArgs) -> CliResult {
    let rows = parse_bench_manifest(&read(&a.manifest)?)?;
    let results: Vec<Result<Vec<String>, Error>> =
        rows.par_iter().map(|r| bench_one(r, a.generator)).collect();
    let mut csv = String::from(
        "instance,n,k,delta,rho,t,scheduleSpan,scheduleLength,bound,attempts,wallMillis\n",
    );
    let mut failed = 0;
    for (i, (row, result)) in rows.iter().zip(&results).enumerate() {
        let tail = match result {
            Ok(cols) => cols.join(","),
            Err(e) => {
                log::warn!("instance {}: {e}", i + 1);
                failed += 1;
                ",,,,,,".to_string()
            }
        };
        csv.push_str(&format!(
            "{},{},{},{},{tail}\n",
            i + 1,
            row.n,
            row.k,
            row.delta
        ));
    }
    write(&a.out, &csv)?;
    write_manifest(
        &a.out,
        &RunManifest {
            subcommand: "bench",
            inputs: BTreeMap::from([("manifest", display(&a.manifest))]),
            parameters: json!({ "generator": a.generator }),
            outputs: BTreeMap::from([("csv", display(&a.out))]),
            stats: json!({ "instances": rows.len(), "failed": failed }),
        },
    )?;
    if failed > 0 {
        Err(rejected(format!(
            "{failed} of {} instances failed",
            rows.len()
        )))
    } else {
        Ok(())
    }
}
