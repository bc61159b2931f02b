//! Convex-hull insertion heuristic.
//!
//! Each color starts from its convex hull with one maximum-crossing edge
//! removed. Free points are then attached one at a time, red then blue,
//! either to a visible chain endpoint or into a visible chain edge. When no
//! free point of a color can see any endpoint or edge the whole procedure
//! restarts from hull construction with the same random stream.

mod chain;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use chain::{hull_edge_crossings, hull_edges, open_hull, Attachment, HullChain, OpenedHull};

use crate::geometry::{convex_hull_indices, GeometryError, Planar};
use crate::path::{crossings_in, Color, Instance, InstanceFrame, PathPair, PolyPath};
use crate::rng::SolverRng;

/// Identifier of the pseudo-random generator behind every solver decision.
pub const RNG_ALGORITHM: &str = "xoshiro256++ seeded by splitmix64";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("{color} set has {count} points; at least three are required")]
    FewerThanThreePoints { color: Color, count: usize },
    #[error("no successful run after {0} restarts")]
    RestartLimitExceeded(u32),
    #[error("attachment target is not visible from the point")]
    TargetNotVisible,
    #[error("invalid solver config: {0}")]
    InvalidConfig(&'static str),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// How an attachment target is picked among the visible ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetRule {
    /// Every visible endpoint and edge equally likely.
    #[default]
    Uniform,
    /// Uniform among the visible targets whose new segments add the fewest
    /// crossings with the other color's current chain.
    FewestCrossings,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub seed: u64,
    pub max_restarts: u32,
    /// Keep the per-run event log in the result.
    #[serde(default)]
    pub record_trace: bool,
    #[serde(default)]
    pub target_rule: TargetRule,
}

impl SolverConfig {
    pub fn new(seed: u64) -> Self {
        SolverConfig {
            seed,
            max_restarts: 100,
            record_trace: false,
            target_rule: TargetRule::Uniform,
        }
    }

    pub fn with_trace(mut self) -> Self {
        self.record_trace = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TraceEvent {
    /// A run (the first one or a restart) opened both hulls.
    Opened {
        red: Vec<usize>,
        blue: Vec<usize>,
        red_removed: (usize, usize),
        blue_removed: (usize, usize),
    },
    Inserted {
        color: Color,
        point: usize,
        target: Attachment,
    },
    /// No free point of `color` could see the chain.
    Stuck { color: Color },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub pair: PathPair,
    pub restarts_used: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceEvent>>,
}

pub fn solve(instance: &Instance, config: &SolverConfig) -> Result<SolveResult, SolveError> {
    match InstanceFrame::new(instance) {
        InstanceFrame::Grid { red, blue } => solve_points(&red, &blue, config),
        InstanceFrame::Exact { red, blue } => solve_points(&red, &blue, config),
    }
}

/// Runs the heuristic on any coordinate kernel.
pub fn solve_points<P: Planar>(
    red: &[P],
    blue: &[P],
    config: &SolverConfig,
) -> Result<SolveResult, SolveError> {
    if config.max_restarts == 0 {
        return Err(SolveError::InvalidConfig("max_restarts must be at least 1"));
    }
    for (color, pts) in [(Color::Red, red), (Color::Blue, blue)] {
        if pts.len() < 3 {
            return Err(SolveError::FewerThanThreePoints { color, count: pts.len() });
        }
    }
    let red_hull = convex_hull_indices(red)?;
    let blue_hull = convex_hull_indices(blue)?;
    let red_edges = hull_edges(red, &red_hull);
    let blue_edges = hull_edges(blue, &blue_hull);

    let mut rng = SolverRng::new(config.seed);
    let mut trace = config.record_trace.then(Vec::new);
    let mut restarts = 0;
    loop {
        let mut run = Run {
            red: ColorState::open(Color::Red, red, &blue_edges, &mut rng)?,
            blue: ColorState::open(Color::Blue, blue, &red_edges, &mut rng)?,
        };
        if let Some(t) = trace.as_mut() {
            t.push(TraceEvent::Opened {
                red: run.red.chain.vertices().to_vec(),
                blue: run.blue.chain.vertices().to_vec(),
                red_removed: run.red.removed,
                blue_removed: run.blue.removed,
            });
        }
        if run.complete(red, blue, config.target_rule, &mut rng, &mut trace) {
            let red_path = PolyPath::new(run.red.chain.vertices().to_vec());
            let blue_path = PolyPath::new(run.blue.chain.vertices().to_vec());
            let crossings = crossings_in(red_path.vertices(), red, blue_path.vertices(), blue);
            return Ok(SolveResult {
                pair: PathPair {
                    red: red_path,
                    blue: blue_path,
                    crossings,
                },
                restarts_used: restarts,
                trace,
            });
        }
        if restarts == config.max_restarts {
            return Err(SolveError::RestartLimitExceeded(restarts));
        }
        restarts += 1;
    }
}

struct ColorState {
    chain: HullChain,
    removed: (usize, usize),
    /// Points not yet on the chain, ascending.
    free: Vec<usize>,
}

impl ColorState {
    fn open<P: Planar>(
        color: Color,
        points: &[P],
        other_edges: &[(P, P)],
        rng: &mut SolverRng,
    ) -> Result<Self, SolveError> {
        let opened = open_hull(color, points, other_edges, rng)?;
        let mut on_chain = vec![false; points.len()];
        for &v in opened.chain.vertices() {
            on_chain[v] = true;
        }
        Ok(ColorState {
            free: (0..points.len()).filter(|&i| !on_chain[i]).collect(),
            chain: opened.chain,
            removed: opened.removed,
        })
    }

    /// Attaches one free point. Candidates are drawn uniformly without
    /// replacement until one sees a target; the target is then drawn
    /// according to `rule`. Returns false when every free point is blocked.
    fn step<P: Planar>(
        &mut self,
        points: &[P],
        other: (&[usize], &[P]),
        rule: TargetRule,
        rng: &mut SolverRng,
        trace: &mut Option<Vec<TraceEvent>>,
    ) -> bool {
        let mut untried = self.free.clone();
        while !untried.is_empty() {
            let p = untried.swap_remove(rng.below(untried.len()));
            let mut targets = self.chain.visible_targets(points, &points[p]);
            if targets.is_empty() {
                continue;
            }
            if rule == TargetRule::FewestCrossings {
                let cost: Vec<i64> = targets
                    .iter()
                    .map(|&t| added_crossings(points, p, t, other))
                    .collect();
                let best = *cost.iter().min().expect("non-empty");
                let mut k = 0;
                targets.retain(|_| {
                    k += 1;
                    cost[k - 1] == best
                });
            }
            let target = targets[rng.below(targets.len())];
            self.chain.attach(p, target);
            debug_assert!(self.chain.is_simple(points), "chain lost simplicity");
            let at = self.free.binary_search(&p).expect("free point");
            self.free.remove(at);
            if let Some(t) = trace.as_mut() {
                t.push(TraceEvent::Inserted {
                    color: self.chain.color,
                    point: p,
                    target,
                });
            }
            return true;
        }
        if let Some(t) = trace.as_mut() {
            t.push(TraceEvent::Stuck { color: self.chain.color });
        }
        false
    }
}

/// Change in crossings against the other chain if `p` is attached at
/// `target`.
/// Negative when the replaced edge crossed more than its two replacements.
fn added_crossings<P: Planar>(points: &[P], p: usize, target: Attachment, other: (&[usize], &[P])) -> i64 {
    let (chain, other_pts) = other;
    let count = |a: usize, b: usize| crossings_in(&[a, b], points, chain, other_pts) as i64;
    match target {
        Attachment::Endpoint(w) => count(p, w),
        Attachment::Edge(a, b) => count(p, a) + count(p, b) - count(a, b),
    }
}

struct Run {
    red: ColorState,
    blue: ColorState,
}

impl Run {
    fn complete<P: Planar>(
        &mut self,
        red: &[P],
        blue: &[P],
        rule: TargetRule,
        rng: &mut SolverRng,
        trace: &mut Option<Vec<TraceEvent>>,
    ) -> bool {
        while !self.red.free.is_empty() || !self.blue.free.is_empty() {
            if !self.red.free.is_empty() {
                let other = (self.blue.chain.vertices(), blue);
                if !self.red.step(red, other, rule, rng, trace) {
                    return false;
                }
            }
            if !self.blue.free.is_empty() {
                let other = (self.red.chain.vertices(), red);
                if !self.blue.step(blue, other, rule, rng, trace) {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{gen_instance, GeneratorConfig};
    use crate::geometry::{GridPoint, Point};
    use crate::path::{is_simple_path, is_spanning};

    fn separated(n: usize, seed: u64) -> Instance {
        let inst = gen_instance(&GeneratorConfig::new(n, seed)).unwrap();
        let shift = |pts: &[Point], dx: i64| -> Vec<Point> {
            pts.iter()
                .map(|p| Point::new(&p.x + crate::geometry::Scalar::from_integer(dx.into()), p.y.clone()))
                .collect()
        };
        // Red in x < 0, blue in x > 1.
        Instance::new(shift(inst.red(), -2), shift(inst.blue(), 2)).unwrap()
    }

    #[test]
    fn separated_colors_never_cross() {
        for seed in 0..20 {
            let inst = separated(4 + seed as usize % 9, seed);
            let res = solve(&inst, &SolverConfig::new(seed)).unwrap();
            assert_eq!(res.pair.crossings, 0);
            assert!(inst.validates(&res.pair));
        }
    }

    #[test]
    fn output_is_simple_and_spanning() {
        for seed in 0..30 {
            let inst = gen_instance(&GeneratorConfig::new(12, seed)).unwrap();
            let res = solve(&inst, &SolverConfig::new(seed)).unwrap();
            assert!(is_spanning(&res.pair.red, 12));
            assert!(is_spanning(&res.pair.blue, 12));
            assert!(is_simple_path(&res.pair.red, inst.red()).unwrap());
            assert!(is_simple_path(&res.pair.blue, inst.blue()).unwrap());
            assert!(inst.validates(&res.pair));
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let inst = gen_instance(&GeneratorConfig::new(15, 3)).unwrap();
        let cfg = SolverConfig::new(77).with_trace();
        let a = serde_json::to_string(&solve(&inst, &cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&solve(&inst, &cfg).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rational_and_lattice_kernels_agree() {
        for seed in 0..10 {
            let inst = gen_instance(&GeneratorConfig::new(9, seed)).unwrap();
            let cfg = SolverConfig::new(seed).with_trace();
            let fast = solve(&inst, &cfg).unwrap();
            let slow = solve_points(inst.red(), inst.blue(), &cfg).unwrap();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn insertion_count_matches_interior_points() {
        let inst = gen_instance(&GeneratorConfig::new(20, 8)).unwrap();
        let res = solve(&inst, &SolverConfig::new(1).with_trace()).unwrap();
        let trace = res.trace.unwrap();
        let last_open = trace
            .iter()
            .rposition(|e| matches!(e, TraceEvent::Opened { .. }))
            .unwrap();
        for color in [Color::Red, Color::Blue] {
            let hull = crate::geometry::convex_hull(inst.points(color)).unwrap();
            let inserted = trace[last_open..]
                .iter()
                .filter(|e| matches!(e, TraceEvent::Inserted { color: c, .. } if *c == color))
                .count();
            assert_eq!(inserted, 20 - hull.len());
        }
    }

    #[test]
    fn three_point_colors_skip_insertion() {
        let red = vec![Point::from_ints(0, 0), Point::from_ints(4, 1), Point::from_ints(1, 5)];
        let blue = vec![
            Point::from_ints(10, 0),
            Point::from_ints(14, 1),
            Point::from_ints(11, 5),
            Point::from_ints(12, 2),
        ];
        let inst = Instance::new(red, blue).unwrap();
        let res = solve(&inst, &SolverConfig::new(0).with_trace()).unwrap();
        assert_eq!(res.pair.red.len(), 3);
        assert_eq!(res.pair.blue.len(), 4);
        let trace = res.trace.unwrap();
        assert!(!trace
            .iter()
            .any(|e| matches!(e, TraceEvent::Inserted { color: Color::Red, .. })));
    }

    #[test]
    fn rejects_small_colors_and_bad_config() {
        let red = vec![Point::from_ints(0, 0), Point::from_ints(4, 1)];
        let blue = vec![Point::from_ints(10, 0), Point::from_ints(14, 1), Point::from_ints(11, 5)];
        let inst = Instance::new(red, blue).unwrap();
        assert_eq!(
            solve(&inst, &SolverConfig::new(0)),
            Err(SolveError::FewerThanThreePoints { color: Color::Red, count: 2 })
        );
        let inst = gen_instance(&GeneratorConfig::new(5, 0)).unwrap();
        let mut cfg = SolverConfig::new(0);
        cfg.max_restarts = 0;
        assert!(matches!(solve(&inst, &cfg), Err(SolveError::InvalidConfig(_))));
    }

    #[test]
    fn fewest_crossings_rule() {
        let (mut uniform, mut fewest) = (0, 0);
        for i in 0..20 {
            let inst = gen_instance(&GeneratorConfig::new(10, i)).unwrap();
            for seed in 0..5 {
                let mut cfg = SolverConfig::new(seed);
                uniform += solve(&inst, &cfg).unwrap().pair.crossings;
                cfg.target_rule = TargetRule::FewestCrossings;
                let res = solve(&inst, &cfg).unwrap();
                assert!(inst.validates(&res.pair));
                fewest += res.pair.crossings;
            }
        }
        assert!(fewest < uniform, "{fewest} vs {uniform}");
    }

    #[test]
    fn restart_limit_is_reported() {
        // The red set is the pocket fixture: some runs get stuck.
        let (red, blue) = crate::fixtures::pocket_points();
        let g = |v: &[(i64, i64)]| v.iter().map(|&(x, y)| GridPoint::new(x, y)).collect::<Vec<_>>();
        let (red, blue) = (g(&red), g(&blue));
        let mut saw_restart = false;
        for seed in 0..2000 {
            let cfg = SolverConfig { seed, max_restarts: 1, ..SolverConfig::new(0) };
            match solve_points(&red, &blue, &cfg) {
                Ok(r) => saw_restart |= r.restarts_used > 0,
                Err(SolveError::RestartLimitExceeded(1)) => saw_restart = true,
                Err(e) => panic!("unexpected {e}"),
            }
        }
        assert!(saw_restart);
    }
}
