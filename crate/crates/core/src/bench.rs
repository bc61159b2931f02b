//! Monte-Carlo experiment harness.
//!
//! Every run is recorded in a flat log keyed by (size, instance, run); the
//! per-size statistics are always computed from that log after sorting it,
//! so parallel and sequential execution produce identical reports and a
//! persisted log can be replayed into the same numbers.
//!
//! Three report kinds share the harness: `Table1` (crossing statistics per
//! size), `Table2` (the same next to exact optima) and `Success` (first-run
//! success rate).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{optimal_pair, ExactError};
use crate::generate::{gen_instance, GenerateError, GeneratorConfig};
use crate::heuristic::{solve, SolveError, SolverConfig, TargetRule, RNG_ALGORITHM};
use crate::path::Instance;
use crate::rng::{instance_seed, run_seed};

/// Instance distribution used by [`uniform_suite`].
pub const DISTRIBUTION: &str = "n red and n blue points i.i.d. uniform over the unit square, \
coordinates k/2^32, redrawn until no triangle has doubled area <= 2^-40";

pub const TABLE_HEADER: &str = "size,instances,runs,min,max,mean,success_rate";
pub const TABLE2_EXTRA_HEADER: &str = "best_mean,exact_mean,exact_exhausted,dominance";
pub const LOG_HEADER: &str = "size,instance,run,seed,crossings,restarts,status";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BenchError {
    #[error("invalid bench config: {0}")]
    InvalidConfig(&'static str),
    #[error("instance {index} of size {size}: {source}")]
    Generate {
        size: usize,
        index: usize,
        source: GenerateError,
    },
    #[error("log line {line}: {reason}")]
    Log { line: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub instances: usize,
    pub runs: usize,
    pub seed: u64,
    pub max_restarts: u32,
    pub target_rule: TargetRule,
    /// Node budget for each exact search in the exact-comparison table.
    pub node_budget: Option<u64>,
}

impl BenchConfig {
    pub fn new(sizes: Vec<usize>, instances: usize, runs: usize, seed: u64) -> Self {
        BenchConfig {
            sizes,
            instances,
            runs,
            seed,
            max_restarts: 100,
            target_rule: TargetRule::Uniform,
            node_budget: None,
        }
    }

    fn validate(&self) -> Result<(), BenchError> {
        if self.sizes.is_empty() {
            return Err(BenchError::InvalidConfig("no sizes given"));
        }
        if self.instances == 0 || self.runs == 0 {
            return Err(BenchError::InvalidConfig("instances and runs must be positive"));
        }
        if self.max_restarts == 0 {
            return Err(BenchError::InvalidConfig("max_restarts must be at least 1"));
        }
        Ok(())
    }
}

/// One instance of an experiment, addressed by size and index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteInstance {
    pub size: usize,
    pub index: usize,
    pub instance: Instance,
}

/// `cfg.instances` generated instances per size, instance `i` of size `n`
/// drawn with seed `instance_seed(cfg.seed, n, i)`.
pub fn uniform_suite(cfg: &BenchConfig) -> Result<Vec<SuiteInstance>, BenchError> {
    cfg.validate()?;
    let keys: Vec<(usize, usize)> = cfg
        .sizes
        .iter()
        .flat_map(|&size| (0..cfg.instances).map(move |index| (size, index)))
        .collect();
    keys.into_par_iter()
        .map(|(size, index)| {
            let seed = instance_seed(cfg.seed, size as u64, index as u64);
            gen_instance(&GeneratorConfig::new(size, seed))
                .map(|instance| SuiteInstance { size, index, instance })
                .map_err(|source| BenchError::Generate { size, index, source })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Ok,
    RestartLimit,
    Error,
}

impl RunStatus {
    fn as_str(self) -> &'static str {
        match self {
            RunStatus::Ok => "ok",
            RunStatus::RestartLimit => "restart-limit",
            RunStatus::Error => "error",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [RunStatus::Ok, RunStatus::RestartLimit, RunStatus::Error]
            .into_iter()
            .find(|r| r.as_str() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub size: usize,
    pub instance: usize,
    pub run: usize,
    pub seed: u64,
    pub crossings: Option<usize>,
    pub restarts: u32,
    pub status: RunStatus,
}

/// Exact optimum of one instance; `optimum` is `None` when the node budget
/// ran out before the search finished.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactRecord {
    pub size: usize,
    pub instance: usize,
    pub optimum: Option<usize>,
    pub nodes: Option<u64>,
    pub exhausted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeRow {
    pub size: usize,
    pub instances: usize,
    pub runs: usize,
    /// Crossing statistics over all successful runs.
    pub min: Option<usize>,
    pub max: Option<usize>,
    pub mean: Option<f64>,
    /// Fraction of runs that finished without a restart.
    pub success_rate: f64,
    pub mean_restarts: f64,
    pub max_restarts: u32,
    pub failed_runs: usize,
    /// Mean over instances of the best run on each instance.
    pub best_mean: Option<f64>,
    pub exact_mean: Option<f64>,
    pub exact_exhausted: usize,
    /// Every run is at least its instance's optimum and the heuristic mean
    /// is at least the exact mean.
    pub dominance: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Table {
    Table1,
    Table2,
    Success,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub table: Table,
    pub distribution: String,
    pub rng: String,
    pub config: BenchConfig,
    pub rows: Vec<SizeRow>,
    pub log: Vec<RunRecord>,
    pub exact: Vec<ExactRecord>,
}

/// All heuristic runs over `suite`, sorted by (size, instance, run).
pub fn run_log(suite: &[SuiteInstance], cfg: &BenchConfig) -> Vec<RunRecord> {
    let mut log: Vec<RunRecord> = suite
        .par_iter()
        .flat_map_iter(|item| {
            (0..cfg.runs).map(move |run| {
                let seed = run_seed(cfg.seed, item.size as u64, item.index as u64, run as u64);
                let solver = SolverConfig {
                    seed,
                    max_restarts: cfg.max_restarts,
                    record_trace: false,
                    target_rule: cfg.target_rule,
                };
                let (crossings, restarts, status) = match solve(&item.instance, &solver) {
                    Ok(res) => (Some(res.pair.crossings), res.restarts_used, RunStatus::Ok),
                    Err(SolveError::RestartLimitExceeded(r)) => (None, r, RunStatus::RestartLimit),
                    Err(_) => (None, 0, RunStatus::Error),
                };
                RunRecord {
                    size: item.size,
                    instance: item.index,
                    run,
                    seed,
                    crossings,
                    restarts,
                    status,
                }
            })
        })
        .collect();
    log.sort_by_key(|r| (r.size, r.instance, r.run));
    log
}

/// Exact optimum of every suite instance, sorted by (size, instance).
pub fn exact_log(suite: &[SuiteInstance], node_budget: Option<u64>) -> Vec<ExactRecord> {
    let mut out: Vec<ExactRecord> = suite
        .par_iter()
        .map(|item| {
            let (optimum, nodes, exhausted) = match optimal_pair(&item.instance, node_budget) {
                Ok(r) => (Some(r.optimum), Some(r.nodes_expanded), false),
                Err(ExactError::BudgetExhausted { .. }) => (None, node_budget, true),
                Err(ExactError::TooLarge(_)) => (None, None, true),
            };
            ExactRecord {
                size: item.size,
                instance: item.index,
                optimum,
                nodes,
                exhausted,
            }
        })
        .collect();
    out.sort_by_key(|r| (r.size, r.instance));
    out
}

fn ratio(sum: u64, count: usize) -> Option<f64> {
    (count > 0).then(|| sum as f64 / count as f64)
}

/// Per-size statistics recomputed from the logs alone.
pub fn summarize(log: &[RunRecord], exact: &[ExactRecord]) -> Vec<SizeRow> {
    let mut sorted = log.to_vec();
    sorted.sort_by_key(|r| (r.size, r.instance, r.run));
    let mut by_size: BTreeMap<usize, Vec<&RunRecord>> = BTreeMap::new();
    for r in &sorted {
        by_size.entry(r.size).or_default().push(r);
    }
    let optimum: BTreeMap<(usize, usize), &ExactRecord> =
        exact.iter().map(|e| ((e.size, e.instance), e)).collect();
    by_size
        .into_iter()
        .map(|(size, runs)| {
            let mut per_instance: BTreeMap<usize, Vec<&RunRecord>> = BTreeMap::new();
            for r in &runs {
                per_instance.entry(r.instance).or_default().push(r);
            }
            let ok: Vec<usize> = runs.iter().filter_map(|r| r.crossings).collect();
            let restarts: u64 = runs.iter().map(|r| r.restarts as u64).sum();
            let first_run = runs.iter().filter(|r| r.status == RunStatus::Ok && r.restarts == 0).count();
            let bests: Vec<usize> = per_instance
                .values()
                .filter_map(|rs| rs.iter().filter_map(|r| r.crossings).min())
                .collect();
            let mean = ratio(ok.iter().map(|&c| c as u64).sum(), ok.len());

            let size_exact: Vec<&ExactRecord> = exact.iter().filter(|e| e.size == size).collect();
            let proven: Vec<usize> = size_exact.iter().filter_map(|e| e.optimum).collect();
            let exact_mean = ratio(proven.iter().map(|&c| c as u64).sum(), proven.len());
            let dominance = (!size_exact.is_empty()).then(|| {
                let per_run = runs.iter().all(|r| {
                    match (r.crossings, optimum.get(&(size, r.instance)).and_then(|e| e.optimum)) {
                        (Some(c), Some(opt)) => c >= opt,
                        _ => true,
                    }
                });
                let means = match (mean, exact_mean) {
                    (Some(h), Some(e)) => h >= e,
                    _ => true,
                };
                per_run && means
            });

            SizeRow {
                size,
                instances: per_instance.len(),
                runs: per_instance.values().map(Vec::len).max().unwrap_or(0),
                min: ok.iter().copied().min(),
                max: ok.iter().copied().max(),
                mean,
                success_rate: first_run as f64 / runs.len() as f64,
                mean_restarts: restarts as f64 / runs.len() as f64,
                max_restarts: runs.iter().map(|r| r.restarts).max().unwrap_or(0),
                failed_runs: runs.iter().filter(|r| r.status != RunStatus::Ok).count(),
                best_mean: ratio(bests.iter().map(|&c| c as u64).sum(), bests.len()),
                exact_mean,
                exact_exhausted: size_exact.iter().filter(|e| e.exhausted).count(),
                dominance,
            }
        })
        .collect()
}

/// Runs the heuristic (and for `Table2` the exact solver) on a given suite.
pub fn bench_suite(table: Table, suite: &[SuiteInstance], cfg: &BenchConfig) -> Result<BenchReport, BenchError> {
    cfg.validate()?;
    let log = run_log(suite, cfg);
    let exact = match table {
        Table::Table2 => exact_log(suite, cfg.node_budget),
        _ => Vec::new(),
    };
    Ok(BenchReport {
        table,
        distribution: DISTRIBUTION.to_string(),
        rng: RNG_ALGORITHM.to_string(),
        config: cfg.clone(),
        rows: summarize(&log, &exact),
        log,
        exact,
    })
}

/// Min, max and mean crossings per size.
pub fn bench_table1(cfg: &BenchConfig) -> Result<BenchReport, BenchError> {
    bench_suite(Table::Table1, &uniform_suite(cfg)?, cfg)
}

/// Heuristic statistics next to the exact optimum per instance.
pub fn bench_table2(cfg: &BenchConfig) -> Result<BenchReport, BenchError> {
    bench_suite(Table::Table2, &uniform_suite(cfg)?, cfg)
}

/// First-run success rate per size.
pub fn success_probability(cfg: &BenchConfig) -> Result<BenchReport, BenchError> {
    bench_suite(Table::Success, &uniform_suite(cfg)?, cfg)
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn fixed(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.4}")).unwrap_or_default()
}

impl BenchReport {
    /// One row per size under [`TABLE_HEADER`], with the exact-comparison columns
    /// appended for `Table2` reports.
    pub fn to_csv(&self) -> String {
        let table2 = self.table == Table::Table2;
        let mut s = String::from(TABLE_HEADER);
        if table2 {
            s.push(',');
            s.push_str(TABLE2_EXTRA_HEADER);
        }
        s.push('\n');
        for r in &self.rows {
            let _ = write!(
                s,
                "{},{},{},{},{},{},{:.4}",
                r.size,
                r.instances,
                r.runs,
                opt(r.min),
                opt(r.max),
                fixed(r.mean),
                r.success_rate
            );
            if table2 {
                let dom = r.dominance.map(|d| if d { "ok" } else { "violated" });
                let _ = write!(
                    s,
                    ",{},{},{},{}",
                    fixed(r.best_mean),
                    fixed(r.exact_mean),
                    r.exact_exhausted,
                    dom.unwrap_or("")
                );
            }
            s.push('\n');
        }
        s
    }

    pub fn log_csv(&self) -> String {
        log_to_csv(&self.log)
    }
}

pub fn log_to_csv(log: &[RunRecord]) -> String {
    let mut s = format!("{LOG_HEADER}\n");
    for r in log {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            r.size,
            r.instance,
            r.run,
            r.seed,
            opt(r.crossings),
            r.restarts,
            r.status.as_str()
        );
    }
    s
}

pub fn parse_log(text: &str) -> Result<Vec<RunRecord>, BenchError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == LOG_HEADER => {}
        _ => {
            return Err(BenchError::Log {
                line: 1,
                reason: format!("expected header {LOG_HEADER:?}"),
            })
        }
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let err = |reason: &str| BenchError::Log {
            line: i + 1,
            reason: reason.to_string(),
        };
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 7 {
            return Err(err("expected 7 fields"));
        }
        let num = |s: &str| s.parse::<u64>().map_err(|_| err("bad integer"));
        out.push(RunRecord {
            size: num(f[0])? as usize,
            instance: num(f[1])? as usize,
            run: num(f[2])? as usize,
            seed: num(f[3])?,
            crossings: if f[4].is_empty() { None } else { Some(num(f[4])? as usize) },
            restarts: num(f[5])? as u32,
            status: RunStatus::parse(f[6]).ok_or_else(|| err("bad status"))?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::separable_instance;
    use crate::heuristic::solve;

    fn small() -> BenchConfig {
        BenchConfig::new(vec![5, 8], 4, 5, 11)
    }

    #[test]
    fn rows_have_consistent_statistics() {
        let rep = bench_table1(&small()).unwrap();
        assert_eq!(rep.rows.len(), 2);
        assert_eq!(rep.log.len(), 2 * 4 * 5);
        for r in &rep.rows {
            let (min, max, mean) = (r.min.unwrap() as f64, r.max.unwrap() as f64, r.mean.unwrap());
            assert!(min <= mean && mean <= max);
            assert!((0.0..=1.0).contains(&r.success_rate));
            assert_eq!((r.instances, r.runs), (4, 5));
        }
    }

    #[test]
    fn log_matches_direct_solver_calls() {
        let cfg = small();
        let suite = uniform_suite(&cfg).unwrap();
        let log = run_log(&suite, &cfg);
        for rec in log.iter().step_by(7) {
            let item = suite.iter().find(|s| s.size == rec.size && s.index == rec.instance).unwrap();
            let res = solve(&item.instance, &SolverConfig::new(rec.seed)).unwrap();
            assert_eq!(rec.crossings, Some(res.pair.crossings));
            assert_eq!(rec.restarts, res.restarts_used);
        }
    }

    #[test]
    fn deterministic_and_order_independent() {
        let cfg = small();
        let a = bench_table1(&cfg).unwrap();
        let b = bench_table1(&cfg).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.log_csv(), b.log_csv());
        let mut shuffled = a.log.clone();
        shuffled.reverse();
        assert_eq!(summarize(&shuffled, &[]), a.rows);
    }

    #[test]
    fn log_replay_reproduces_report() {
        let rep = bench_table2(&BenchConfig::new(vec![5], 5, 4, 2)).unwrap();
        let replayed = parse_log(&rep.log_csv()).unwrap();
        assert_eq!(replayed, rep.log);
        assert_eq!(summarize(&replayed, &rep.exact), rep.rows);
    }

    #[test]
    fn table2_dominance_and_columns() {
        let rep = bench_table2(&BenchConfig::new(vec![5, 6], 6, 5, 3)).unwrap();
        let csv = rep.to_csv();
        assert!(csv.starts_with(&format!("{TABLE_HEADER},{TABLE2_EXTRA_HEADER}\n")));
        for r in &rep.rows {
            assert_eq!(r.dominance, Some(true));
            assert!(r.best_mean.unwrap() >= r.exact_mean.unwrap());
            assert_eq!(r.exact_exhausted, 0);
        }
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let mut cfg = BenchConfig::new(vec![6], 3, 2, 3);
        cfg.node_budget = Some(5);
        let rep = bench_table2(&cfg).unwrap();
        assert_eq!(rep.rows[0].exact_exhausted, 3);
        assert_eq!(rep.rows[0].exact_mean, None);
        assert!(rep.to_csv().lines().nth(1).unwrap().ends_with(",,3,ok"));
    }

    #[test]
    fn separable_suite_is_all_zero() {
        let suite: Vec<SuiteInstance> = (0..5)
            .map(|i| SuiteInstance {
                size: 4 + i,
                index: 0,
                instance: separable_instance(4 + i),
            })
            .collect();
        let rep = bench_suite(Table::Table1, &suite, &BenchConfig::new(vec![0], 1, 10, 9)).unwrap();
        for r in &rep.rows {
            assert_eq!((r.min, r.max, r.mean), (Some(0), Some(0), Some(0.0)));
            assert_eq!(r.success_rate, 1.0);
        }
    }

    #[test]
    fn malformed_logs_are_rejected() {
        assert!(parse_log("").is_err());
        assert!(parse_log(&format!("{LOG_HEADER}\n1,2,3")).is_err());
        assert!(parse_log(&format!("{LOG_HEADER}\n1,2,3,4,x,0,ok")).is_err());
        assert!(parse_log(&format!("{LOG_HEADER}\n1,2,3,4,5,0,maybe")).is_err());
        assert_eq!(parse_log(&format!("{LOG_HEADER}\n1,2,3,4,,7,restart-limit\n")).unwrap().len(), 1);
    }

    #[test]
    fn invalid_configs() {
        assert!(bench_table1(&BenchConfig::new(vec![], 1, 1, 0)).is_err());
        assert!(bench_table1(&BenchConfig::new(vec![5], 0, 1, 0)).is_err());
        assert!(matches!(
            bench_table1(&BenchConfig::new(vec![2], 1, 1, 0)),
            Err(BenchError::Generate { size: 2, .. })
        ));
    }
}
