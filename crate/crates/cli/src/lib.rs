//! Command-line front end for the disjoint-paths library.
//!
//! Exit status is 0 on success, 1 on domain errors (invalid input, solver
//! failure, failed verification) and 2 on usage errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use disjoint_paths::bench::{self, BenchConfig, BenchReport, DISTRIBUTION};
use disjoint_paths::exact::{optimal_pair, ExactError, ExactResult};
use disjoint_paths::gadgets::{
    convert_function2, convert_slpg, ham_path_exists, side_counts, verify_visibility_iff_edge, visibility_graph,
    GadgetInstance, Mode, PlaneGraph,
};
use disjoint_paths::generate::{gen_instance, GeneratorConfig};
use disjoint_paths::heuristic::{solve, SolveError, SolveResult, SolverConfig, TargetRule, RNG_ALGORITHM};
use disjoint_paths::io;
use disjoint_paths::path::{Instance, PathPair};
use disjoint_paths::rng::mix;
use disjoint_paths::svg::render_svg;

/// Largest graph on which `verify` also compares Hamiltonian paths.
const VERIFY_HAM_LIMIT: usize = 16;

#[derive(Parser)]
#[command(name = "dpaths", version, about = "Disjoint red/blue spanning paths: heuristic, exact search, reductions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance.
    Gen(GenArgs),
    /// Run the insertion heuristic.
    Solve(SolveArgs),
    /// Find a minimum-crossing pair by exhaustive search.
    Exact(ExactArgs),
    /// Convert a plane graph into a gadget point set.
    Reduce(ReduceArgs),
    /// Check a gadget point set against its graph.
    Verify(VerifyArgs),
    /// Run a Monte-Carlo experiment.
    Bench(BenchArgs),
    /// Draw an instance, a solution or a gadget as SVG.
    Render(RenderArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Slpg,
    Function2,
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    Uniform,
    FewestCrossings,
}

impl From<RuleArg> for TargetRule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::Uniform => TargetRule::Uniform,
            RuleArg::FewestCrossings => TargetRule::FewestCrossings,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TableArg {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    Success,
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// Points per color.
    #[arg(long, value_parser = clap::value_parser!(u64).range(3..))]
    n: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct HeuristicArgs {
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
    max_restarts: u32,
    #[arg(long, value_enum, default_value_t = RuleArg::Uniform)]
    target_rule: RuleArg,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance JSON file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Seed of the first run; run r > 0 uses mix(seed, r).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Independent runs; the best one is reported.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    runs: u64,
    #[command(flatten)]
    heuristic: HeuristicArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ExactArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Stop after this many search nodes.
    #[arg(long)]
    node_budget: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ReduceArgs {
    /// Plane graph JSON file.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Function2)]
    mode: ModeArg,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct VerifyArgs {
    /// Gadget JSON file written by `reduce`.
    #[arg(long = "in")]
    input: PathBuf,
    /// The plane graph the gadget was built from.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum, default_value_t = TableArg::One)]
    table: TableArg,
    /// Comma-separated sizes; defaults depend on the table.
    #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u64).range(3..))]
    sizes: Option<Vec<u64>>,
    /// Instances per size.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// Heuristic runs per instance.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    runs: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    heuristic: HeuristicArgs,
    /// Node budget for each exact search (exact-comparison table).
    #[arg(long)]
    node_budget: Option<u64>,
    /// Also write the per-run log as CSV.
    #[arg(long)]
    log: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct RenderArgs {
    /// Instance JSON file.
    #[arg(long = "in", required_unless_present = "gadget")]
    input: Option<PathBuf>,
    /// Solve the instance with this seed and draw the paths.
    #[arg(long, requires = "input")]
    seed: Option<u64>,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
    max_restarts: u32,
    /// Gadget JSON file to draw.
    #[arg(long)]
    gadget: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn emit(output: &Output, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match &output.out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => stdout.write_all(text.as_bytes()).context("cannot write to stdout"),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON value");
    s.push('\n');
    s
}

fn load_instance(path: &Path) -> Result<Instance> {
    io::instance_from_json(&read(path)?).with_context(|| format!("invalid instance file {}", path.display()))
}

fn load_graph(path: &Path) -> Result<PlaneGraph> {
    io::graph_from_json(&read(path)?).with_context(|| format!("invalid graph file {}", path.display()))
}

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn pair_text(s: &mut String, pair: &PathPair) {
    let _ = writeln!(s, "crossings {}", pair.crossings);
    let _ = writeln!(s, "red {}", join(pair.red.vertices()));
    let _ = writeln!(s, "blue {}", join(pair.blue.vertices()));
}

fn cmd_gen(a: GenArgs, stdout: &mut dyn Write) -> Result<()> {
    let n = a.n as usize;
    let inst = gen_instance(&GeneratorConfig::new(n, a.seed))?;
    let meta = json!({ "n": n, "seed": a.seed, "distribution": DISTRIBUTION, "rng": RNG_ALGORITHM });
    emit(&a.output, &io::instance_to_json(&inst, Some(meta)), stdout)
}

fn cmd_solve(a: SolveArgs, stdout: &mut dyn Write) -> Result<()> {
    let inst = load_instance(&a.input)?;
    let mut runs: Vec<(u64, Result<SolveResult, SolveError>)> = Vec::new();
    for r in 0..a.runs {
        let seed = if r == 0 { a.seed } else { mix(a.seed, r) };
        let cfg = SolverConfig {
            seed,
            max_restarts: a.heuristic.max_restarts,
            record_trace: false,
            target_rule: a.heuristic.target_rule.into(),
        };
        let res = solve(&inst, &cfg);
        if let Err(e) = &res {
            if !matches!(e, SolveError::RestartLimitExceeded(_)) {
                bail!("{e}");
            }
        }
        runs.push((seed, res));
    }
    let ok: Vec<(u64, &SolveResult)> = runs.iter().filter_map(|(s, r)| r.as_ref().ok().map(|r| (*s, r))).collect();
    let Some(&(best_seed, best)) = ok.iter().min_by_key(|(_, r)| r.pair.crossings) else {
        bail!("{}", runs[0].1.as_ref().unwrap_err());
    };
    let mean = ok.iter().map(|(_, r)| r.pair.crossings as f64).sum::<f64>() / ok.len() as f64;
    let text = match a.format {
        Format::Text => {
            let mut s = String::new();
            pair_text(&mut s, &best.pair);
            let _ = writeln!(s, "seed {best_seed}");
            let _ = writeln!(s, "restarts {}", best.restarts_used);
            if a.runs > 1 {
                let _ = writeln!(s, "runs {} succeeded {} mean {mean:.4}", a.runs, ok.len());
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("run,seed,crossings,restarts,status\n");
            for (i, (seed, r)) in runs.iter().enumerate() {
                let _ = match r {
                    Ok(r) => writeln!(s, "{i},{seed},{},{},ok", r.pair.crossings, r.restarts_used),
                    Err(SolveError::RestartLimitExceeded(n)) => writeln!(s, "{i},{seed},,{n},restart-limit"),
                    Err(_) => unreachable!("other errors abort the command"),
                };
            }
            s
        }
        Format::Json => {
            let per_run: Vec<Value> = runs
                .iter()
                .map(|(seed, r)| match r {
                    Ok(r) => json!({"seed": seed, "crossings": r.pair.crossings, "restarts": r.restarts_used}),
                    Err(e) => json!({"seed": seed, "error": e.to_string()}),
                })
                .collect();
            pretty(&json!({
                "rng": RNG_ALGORITHM,
                "best": { "seed": best_seed, "restarts": best.restarts_used, "pair": best.pair },
                "mean_crossings": mean,
                "runs": per_run,
            }))
        }
    };
    emit(&a.output, &text, stdout)
}

fn exact_text(res: &ExactResult) -> String {
    let mut s = String::new();
    pair_text(&mut s, &res.pair);
    let _ = writeln!(s, "nodes {}", res.nodes_expanded);
    s
}

fn cmd_exact(a: ExactArgs, stdout: &mut dyn Write) -> Result<()> {
    let inst = load_instance(&a.input)?;
    let res = match optimal_pair(&inst, a.node_budget) {
        Ok(r) => r,
        Err(ExactError::BudgetExhausted { incumbent }) => {
            let best = incumbent.map(|r| format!("; best found has {} crossings", r.optimum));
            bail!("node budget exhausted before the optimum was proven{}", best.unwrap_or_default());
        }
        Err(e) => bail!("{e}"),
    };
    let text = match a.format {
        Format::Json => pretty(&json!({ "optimum": res.optimum, "nodes_expanded": res.nodes_expanded, "pair": res.pair })),
        Format::Csv => format!("optimum,nodes\n{},{}\n", res.optimum, res.nodes_expanded),
        Format::Text => exact_text(&res),
    };
    emit(&a.output, &text, stdout)
}

fn cmd_reduce(a: ReduceArgs, stdout: &mut dyn Write) -> Result<()> {
    let g = load_graph(&a.input)?;
    let gi = match a.mode {
        ModeArg::Slpg => convert_slpg(&g)?,
        ModeArg::Function2 => convert_function2(&g)?,
    };
    emit(&a.output, &io::gadget_to_json(&gi), stdout)
}

/// Every check `verify` runs, as (name, passed, detail).
fn verify_checks(g: &PlaneGraph, gi: &GadgetInstance) -> Result<Vec<(String, bool, Value)>> {
    let mut checks = Vec::new();
    if gi.u != g.vertices() {
        bail!("gadget vertex set differs from the graph's vertices");
    }
    let vis = verify_visibility_iff_edge(g, gi);
    checks.push(("visibility-iff-edge".into(), vis.passed(), json!(vis)));

    let non_edges = g.non_edges().len();
    let expected = match gi.mode {
        Mode::Slpg => non_edges,
        Mode::Function2 => 2 * non_edges,
    };
    checks.push((
        "blocker-count".into(),
        gi.blockers() == expected,
        json!({ "blockers": gi.blockers(), "expected": expected }),
    ));

    if gi.mode == Mode::Function2 {
        let mut bad = Vec::new();
        for v in 0..g.len() {
            match g.degree(v) {
                1 if gi.epsilon_points(v) < 3 => bad.push(json!({ "vertex": v, "epsilon_points": gi.epsilon_points(v) })),
                2 => {
                    let c = side_counts(g, gi, v).expect("degree 2 with epsilon");
                    if (c.concave_positions, c.convex_positions) != (5, 1) {
                        bad.push(json!({ "vertex": v, "sides": c }));
                    }
                }
                _ => {}
            }
        }
        checks.push(("epsilon-structure".into(), bad.is_empty(), json!(bad)));
    }

    if g.len() <= VERIFY_HAM_LIMIT {
        let in_graph = ham_path_exists(&g.graph(), VERIFY_HAM_LIMIT)?;
        let in_vis = ham_path_exists(&visibility_graph(&gi.u, &gi.w), VERIFY_HAM_LIMIT)?;
        checks.push((
            "hamiltonian-path-equivalence".into(),
            in_graph == in_vis,
            json!({ "graph": in_graph, "visibility_graph": in_vis }),
        ));
    }
    Ok(checks)
}

fn cmd_verify(a: VerifyArgs, stdout: &mut dyn Write) -> Result<bool> {
    let g = load_graph(&a.graph)?;
    let gi = io::gadget_from_json(&read(&a.input)?).with_context(|| format!("invalid gadget file {}", a.input.display()))?;
    let checks = verify_checks(&g, &gi)?;
    let passed = checks.iter().all(|c| c.1);
    let text = match a.format {
        Format::Json => {
            let list: Vec<Value> = checks
                .iter()
                .map(|(name, ok, detail)| json!({ "check": name, "passed": ok, "detail": detail }))
                .collect();
            pretty(&json!({ "passed": passed, "checks": list }))
        }
        Format::Csv => {
            let mut s = String::from("check,passed\n");
            for (name, ok, _) in &checks {
                let _ = writeln!(s, "{name},{ok}");
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for (name, ok, detail) in &checks {
                let _ = writeln!(s, "{} {name}", if *ok { "PASS" } else { "FAIL" });
                if !ok {
                    let _ = writeln!(s, "  {detail}");
                }
            }
            let _ = writeln!(s, "{}", if passed { "verified" } else { "verification failed" });
            s
        }
    };
    emit(&a.output, &text, stdout)?;
    Ok(passed)
}

fn cmd_bench(a: BenchArgs, stdout: &mut dyn Write) -> Result<()> {
    let sizes: Vec<usize> = match a.sizes {
        Some(s) => s.into_iter().map(|n| n as usize).collect(),
        None => match a.table {
            TableArg::One | TableArg::Success => vec![10, 20, 30, 40, 50],
            TableArg::Two => vec![5, 6, 7],
        },
    };
    let cfg = BenchConfig {
        sizes,
        instances: a.trials as usize,
        runs: a.runs as usize,
        seed: a.seed,
        max_restarts: a.heuristic.max_restarts,
        target_rule: a.heuristic.target_rule.into(),
        node_budget: a.node_budget,
    };
    let report: BenchReport = match a.table {
        TableArg::One => bench::bench_table1(&cfg)?,
        TableArg::Two => bench::bench_table2(&cfg)?,
        TableArg::Success => bench::success_probability(&cfg)?,
    };
    if let Some(path) = &a.log {
        fs::write(path, report.log_csv()).with_context(|| format!("cannot write {}", path.display()))?;
    }
    let text = match a.format {
        Format::Json => pretty(&serde_json::to_value(&report)?),
        Format::Csv | Format::Text => report.to_csv(),
    };
    emit(&a.output, &text, stdout)
}

fn cmd_render(a: RenderArgs, stdout: &mut dyn Write) -> Result<()> {
    let inst = a.input.as_deref().map(load_instance).transpose()?;
    let pair = match (&inst, a.seed) {
        (Some(inst), Some(seed)) => {
            let cfg = SolverConfig {
                max_restarts: a.max_restarts,
                ..SolverConfig::new(seed)
            };
            Some(solve(inst, &cfg)?.pair)
        }
        _ => None,
    };
    let gadget = match &a.gadget {
        Some(p) => Some(io::gadget_from_json(&read(p)?).with_context(|| format!("invalid gadget file {}", p.display()))?),
        None => None,
    };
    emit(&a.output, &render_svg(inst.as_ref(), pair.as_ref(), gadget.as_ref()), stdout)
}

fn dispatch(cli: Cli, stdout: &mut dyn Write) -> Result<bool> {
    match cli.command {
        Command::Gen(a) => cmd_gen(a, stdout),
        Command::Solve(a) => cmd_solve(a, stdout),
        Command::Exact(a) => cmd_exact(a, stdout),
        Command::Reduce(a) => cmd_reduce(a, stdout),
        Command::Verify(a) => return cmd_verify(a, stdout),
        Command::Bench(a) => cmd_bench(a, stdout),
        Command::Render(a) => cmd_render(a, stdout),
    }
    .map(|()| true)
}

/// Runs one command line (program name first) and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return e.exit_code() as u8;
        }
    };
    match dispatch(cli, stdout) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            1
        }
    }
}
