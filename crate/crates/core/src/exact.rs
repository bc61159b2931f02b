//! Exact minimum-crossing search over all pairs of spanning simple paths.
//!
//! Red paths are enumerated completely first; for each one, blue paths are
//! grown against the fixed red path and cut as soon as their crossing count
//! reaches the incumbent. Each path is enumerated in one direction only
//! (first vertex index below last vertex index). All geometric predicates
//! are evaluated once up front into segment tables.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{crossing, meet_only_at, Crossing, Planar};
use crate::path::{Instance, InstanceFrame, PathPair, PolyPath};

/// Largest color size the search accepts.
pub const MAX_POINTS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("node budget exhausted")]
    BudgetExhausted { incumbent: Option<Box<ExactResult>> },
    #[error("color with {0} points exceeds the exact-search limit")]
    TooLarge(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactResult {
    pub pair: PathPair,
    pub optimum: usize,
    pub nodes_expanded: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchOptions {
    pub node_budget: Option<u64>,
    /// Disable incumbent pruning (self-intersection pruning stays on).
    pub exhaustive: bool,
}

pub fn optimal_pair(instance: &Instance, node_budget: Option<u64>) -> Result<ExactResult, ExactError> {
    let options = SearchOptions {
        node_budget,
        exhaustive: false,
    };
    optimal_pair_with(instance, options)
}

pub fn optimal_pair_with(instance: &Instance, options: SearchOptions) -> Result<ExactResult, ExactError> {
    match InstanceFrame::new(instance) {
        InstanceFrame::Grid { red, blue } => search(&red, &blue, options),
        InstanceFrame::Exact { red, blue } => search(&red, &blue, options),
    }
}

/// True iff some pair of spanning simple paths has no crossing.
pub fn exists_disjoint(instance: &Instance, node_budget: Option<u64>) -> Result<bool, ExactError> {
    // The search stops at the first zero-crossing incumbent.
    optimal_pair(instance, node_budget).map(|r| r.optimum == 0)
}

/// Pairwise segment tables for one color, indexed by `i * n + j`.
struct ColorTables {
    n: usize,
    /// Segments that cannot both appear in one simple path.
    conflict: Vec<Vec<bool>>,
}

impl ColorTables {
    fn new<P: Planar>(points: &[P]) -> Self {
        let n = points.len();
        let ids = n * n;
        let mut conflict = vec![vec![false; ids]; ids];
        for a in 0..n {
            for b in a + 1..n {
                for c in 0..n {
                    for d in c + 1..n {
                        let clash = if (a, b) == (c, d) {
                            false
                        } else if let Some((shared, x, y)) = shared_endpoint((a, b), (c, d)) {
                            !meet_only_at(&points[shared], &points[x], &points[y])
                        } else {
                            crossing(&points[a], &points[b], &points[c], &points[d]) != Crossing::None
                        };
                        for s in [a * n + b, b * n + a] {
                            for t in [c * n + d, d * n + c] {
                                conflict[s][t] = clash;
                            }
                        }
                    }
                }
            }
        }
        ColorTables { n, conflict }
    }

    fn seg(&self, a: usize, b: usize) -> usize {
        a * self.n + b
    }
}

fn shared_endpoint(s: (usize, usize), t: (usize, usize)) -> Option<(usize, usize, usize)> {
    if s.0 == t.0 {
        Some((s.0, s.1, t.1))
    } else if s.0 == t.1 {
        Some((s.0, s.1, t.0))
    } else if s.1 == t.0 {
        Some((s.1, s.0, t.1))
    } else if s.1 == t.1 {
        Some((s.1, s.0, t.0))
    } else {
        None
    }
}

struct Search<'a> {
    red: &'a ColorTables,
    blue: &'a ColorTables,
    /// `cross[r][b]`: red segment id `r` properly crosses blue segment id `b`.
    cross: Vec<Vec<bool>>,
    options: SearchOptions,
    nodes: u64,
    best: Option<(usize, Vec<usize>, Vec<usize>)>,
    out_of_budget: bool,
}

/// Depth-first enumerator of direction-canonical simple paths.
struct PathWalk {
    path: Vec<usize>,
    segs: Vec<usize>,
}

fn search<P: Planar>(red: &[P], blue: &[P], options: SearchOptions) -> Result<ExactResult, ExactError> {
    for pts in [red, blue] {
        if pts.len() > MAX_POINTS {
            return Err(ExactError::TooLarge(pts.len()));
        }
    }
    let rt = ColorTables::new(red);
    let bt = ColorTables::new(blue);
    let mut cross = vec![vec![false; bt.n * bt.n]; rt.n * rt.n];
    for a in 0..rt.n {
        for b in 0..rt.n {
            if a == b {
                continue;
            }
            for c in 0..bt.n {
                for d in 0..bt.n {
                    if c != d {
                        cross[a * rt.n + b][c * bt.n + d] =
                            crossing(&red[a], &red[b], &blue[c], &blue[d]) == Crossing::Proper;
                    }
                }
            }
        }
    }
    let mut s = Search {
        red: &rt,
        blue: &bt,
        cross,
        options,
        nodes: 0,
        best: None,
        out_of_budget: false,
    };
    for start in 0..rt.n {
        let mut walk = PathWalk {
            path: vec![start],
            segs: Vec::new(),
        };
        s.red_dfs(&mut walk, 1u32 << start);
        if s.done() {
            break;
        }
    }
    let nodes = s.nodes;
    let result = s.best.map(|(optimum, r, b)| ExactResult {
        pair: PathPair {
            red: PolyPath::new(r),
            blue: PolyPath::new(b),
            crossings: optimum,
        },
        optimum,
        nodes_expanded: nodes,
    });
    if s.out_of_budget {
        return Err(ExactError::BudgetExhausted {
            incumbent: result.map(Box::new),
        });
    }
    Ok(result.expect("every color has at least one spanning simple path"))
}

impl Search<'_> {
    fn done(&self) -> bool {
        self.out_of_budget || (!self.options.exhaustive && matches!(self.best, Some((0, _, _))))
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if let Some(limit) = self.options.node_budget {
            if self.nodes > limit {
                self.out_of_budget = true;
            }
        }
        !self.out_of_budget
    }

    fn red_dfs(&mut self, walk: &mut PathWalk, used: u32) {
        if !self.tick() {
            return;
        }
        let n = self.red.n;
        if walk.path.len() == n {
            if n == 1 || walk.path[0] < walk.path[n - 1] {
                let cost = self.blue_costs(&walk.segs);
                let red_path = walk.path.clone();
                for start in 0..self.blue.n {
                    let mut bw = PathWalk {
                        path: vec![start],
                        segs: Vec::new(),
                    };
                    self.blue_dfs(&mut bw, 1u32 << start, 0, &cost, &red_path);
                    if self.done() {
                        return;
                    }
                }
            }
            return;
        }
        if !can_close(walk.path[0], used, n) {
            return;
        }
        let last = *walk.path.last().expect("non-empty");
        for next in 0..n {
            if used & (1 << next) != 0 {
                continue;
            }
            let s = self.red.seg(last, next);
            if walk.segs.iter().any(|&t| self.red.conflict[s][t]) {
                continue;
            }
            walk.path.push(next);
            walk.segs.push(s);
            self.red_dfs(walk, used | (1 << next));
            walk.path.pop();
            walk.segs.pop();
            if self.done() {
                return;
            }
        }
    }

    fn blue_costs(&self, red_segs: &[usize]) -> Vec<usize> {
        let ids = self.blue.n * self.blue.n;
        (0..ids)
            .map(|b| red_segs.iter().filter(|&&r| self.cross[r][b]).count())
            .collect()
    }

    fn blue_dfs(&mut self, walk: &mut PathWalk, used: u32, cost: usize, costs: &[usize], red_path: &[usize]) {
        if !self.tick() {
            return;
        }
        if !self.options.exhaustive {
            if let Some((best, _, _)) = self.best {
                if cost >= best {
                    return;
                }
            }
        }
        let n = self.blue.n;
        if walk.path.len() == n {
            if n == 1 || walk.path[0] < walk.path[n - 1] {
                let better = self.best.as_ref().is_none_or(|(best, _, _)| cost < *best);
                if better {
                    self.best = Some((cost, red_path.to_vec(), walk.path.clone()));
                }
            }
            return;
        }
        if !can_close(walk.path[0], used, n) {
            return;
        }
        let last = *walk.path.last().expect("non-empty");
        for next in 0..n {
            if used & (1 << next) != 0 {
                continue;
            }
            let s = self.blue.seg(last, next);
            if walk.segs.iter().any(|&t| self.blue.conflict[s][t]) {
                continue;
            }
            walk.path.push(next);
            walk.segs.push(s);
            self.blue_dfs(walk, used | (1 << next), cost + costs[s], costs, red_path);
            walk.path.pop();
            walk.segs.pop();
            if self.done() {
                return;
            }
        }
    }
}

/// A canonical path must end above its start: some unused index must exceed
/// `start`.
fn can_close(start: usize, used: u32, n: usize) -> bool {
    let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let unused = all & !used;
    unused == 0 || (unused >> (start + 1)) != 0
}
