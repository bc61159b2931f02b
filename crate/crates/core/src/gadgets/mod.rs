//! Reduction gadgets: straight-line plane graphs turned into point sets whose
//! visibility structure encodes the graph.
//!
//! `convert_slpg` puts one blocker on every non-edge so that two vertices see
//! each other exactly when they are adjacent. `convert_function2` surrounds
//! every vertex with points at distance ε: two blockers per non-edge, one
//! point per free sector of the extended-edge fan and one point on every
//! extended edge.

pub mod corpus;
mod fan;
mod function2;
mod graph;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{crossing, is_general_position, point_on_segment, Crossing, Point, Scalar};

pub use fan::{side_counts, ExtendedEdgeFan, FanBoundary, SideCounts};
pub use function2::{choose_epsilon, convert_function2, initial_epsilon, MAX_HALVINGS};
pub use graph::{ham_path_exists, SimpleGraph, HAM_PATH_HARD_LIMIT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("edge ({0}, {1}) refers to a missing vertex")]
    EdgeOutOfRange(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge ({0}, {1}) listed twice")]
    DuplicateEdge(usize, usize),
    #[error("graph vertices are not in general position")]
    NotGeneralPosition,
    #[error("edges ({0}, {1}) and ({2}, {3}) cross")]
    EdgesCross(usize, usize, usize, usize),
    #[error("no valid blocker position on non-edge ({0}, {1})")]
    PlacementFailed(usize, usize),
    #[error("no rational direction found for a point around vertex {0}")]
    DirectionUnavailable(usize),
    #[error("epsilon validation failed after {0} halvings")]
    EpsilonExhausted(u32),
    #[error("graph has {n} vertices, above the limit of {limit}")]
    LimitExceeded { n: usize, limit: usize },
}

/// Straight-line plane graph with vertices in general position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneGraph {
    vertices: Vec<Point>,
    /// Normalized `(low, high)` pairs in ascending order.
    edges: Vec<(usize, usize)>,
}

impl PlaneGraph {
    pub fn new(vertices: Vec<Point>, edges: Vec<(usize, usize)>) -> Result<Self, GadgetError> {
        let n = vertices.len();
        let mut norm = Vec::with_capacity(edges.len());
        for &(a, b) in &edges {
            if a >= n || b >= n {
                return Err(GadgetError::EdgeOutOfRange(a, b));
            }
            if a == b {
                return Err(GadgetError::SelfLoop(a));
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
            return Err(GadgetError::DuplicateEdge(w[0].0, w[0].1));
        }
        if !is_general_position(&vertices) {
            return Err(GadgetError::NotGeneralPosition);
        }
        for (i, &(a, b)) in norm.iter().enumerate() {
            for &(c, d) in &norm[i + 1..] {
                if a == c || a == d || b == c || b == d {
                    // General position rules out overlap at a shared endpoint.
                    continue;
                }
                if crossing(&vertices[a], &vertices[b], &vertices[c], &vertices[d]) != Crossing::None {
                    return Err(GadgetError::EdgesCross(a, b, c, d));
                }
            }
        }
        Ok(PlaneGraph { vertices, edges: norm })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    /// Neighbors of `v`, ascending.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| match v {
                _ if a == v => Some(b),
                _ if b == v => Some(a),
                _ => None,
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Vertex pairs `(i, j)`, `i < j`, that are not edges, in lexicographic
    /// order.
    pub fn non_edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.has_edge(i, j))
            .collect()
    }

    pub fn graph(&self) -> SimpleGraph {
        SimpleGraph::new(self.len(), self.edges.iter().copied())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Slpg,
    Function2,
}

/// Why a W point exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// Blocks the non-edge `(low, high)`. `near` is the endpoint it sits
    /// close to (distance-ε blockers only).
    Blocker {
        non_edge: (usize, usize),
        near: Option<usize>,
    },
    /// Fills sector `sector` of the vertex's extended-edge fan. Isolated
    /// vertices get three of these.
    RegionPoint { vertex: usize, sector: usize },
    /// Sits on the extension of edge `(neighbor, vertex)` beyond `vertex`.
    RayPoint { vertex: usize, neighbor: usize },
}

impl Provenance {
    /// Vertex this point was generated around, if any.
    pub fn owner(&self) -> Option<usize> {
        match *self {
            Provenance::Blocker { near, .. } => near,
            Provenance::RegionPoint { vertex, .. } | Provenance::RayPoint { vertex, .. } => Some(vertex),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WLabel {
    #[serde(flatten)]
    pub provenance: Provenance,
    /// Distance to the owner is exactly ε. When false the point lies on its
    /// prescribed line at a distance in `[ε/2, ε)` because the exact-ε point
    /// there is irrational. Always true for points without an owner.
    pub exact_distance: bool,
}

/// Output of a conversion: `u` is the graph's vertex set, `w` the added
/// points with one label each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetInstance {
    pub mode: Mode,
    pub u: Vec<Point>,
    pub w: Vec<Point>,
    pub labels: Vec<WLabel>,
    pub epsilon: Option<Scalar>,
    /// How many times ε was halved before validation passed.
    pub halvings: u32,
}

impl GadgetInstance {
    pub fn blockers(&self) -> usize {
        self.labels
            .iter()
            .filter(|l| matches!(l.provenance, Provenance::Blocker { .. }))
            .count()
    }

    /// W points generated around vertex `v`.
    pub fn owned_by(&self, v: usize) -> impl Iterator<Item = (&Point, &WLabel)> + '_ {
        self.w
            .iter()
            .zip(&self.labels)
            .filter(move |(_, l)| l.provenance.owner() == Some(v))
    }

    /// Owned points of `v` whose distance to `v` lies in `[ε/2, ε]`.
    pub fn epsilon_points(&self, v: usize) -> usize {
        let Some(eps) = &self.epsilon else {
            return 0;
        };
        let hi = eps * eps;
        let lo = &hi / Scalar::from_integer(4.into());
        let center = &self.u[v];
        self.owned_by(v)
            .filter(|(p, _)| {
                let d = p.dist_sq(center);
                d >= lo && d <= hi
            })
            .count()
    }
}

/// Reduced fractions in `(0, 1)` ordered by denominator, then numerator:
/// 1/2, 1/3, 2/3, 1/4, 3/4, 1/5, ...
pub fn blocker_parameters(max_den: i64) -> impl Iterator<Item = Scalar> {
    (2..=max_den).flat_map(move |d| {
        (1..d)
            .filter(move |&n| num_integer::gcd(n, d) == 1)
            .map(move |n| Scalar::new(n.into(), d.into()))
    })
}

/// Largest denominator tried when placing a blocker.
pub const MAX_BLOCKER_DENOMINATOR: i64 = 64;

/// One blocker per non-edge, at the first parameter `t` in
/// [`blocker_parameters`] where `u + t (v - u)` touches no other vertex pair
/// segment and no earlier point.
pub fn convert_slpg(g: &PlaneGraph) -> Result<GadgetInstance, GadgetError> {
    let u = g.vertices();
    let pairs = all_pairs(g.len());
    let mut w: Vec<Point> = Vec::new();
    let mut labels = Vec::new();
    for (a, b) in g.non_edges() {
        let (pa, pb) = (&u[a], &u[b]);
        let dx = &pb.x - &pa.x;
        let dy = &pb.y - &pa.y;
        let placed = blocker_parameters(MAX_BLOCKER_DENOMINATOR).find_map(|t| {
            let p = Point::new(&pa.x + &t * &dx, &pa.y + &t * &dy);
            let clash = w.contains(&p)
                || pairs
                    .iter()
                    .any(|&(x, y)| (x, y) != (a, b) && point_on_segment(&p, &u[x], &u[y]));
            (!clash).then_some(p)
        });
        let p = placed.ok_or(GadgetError::PlacementFailed(a, b))?;
        w.push(p);
        labels.push(WLabel {
            provenance: Provenance::Blocker {
                non_edge: (a, b),
                near: None,
            },
            exact_distance: true,
        });
    }
    Ok(GadgetInstance {
        mode: Mode::Slpg,
        u: u.to_vec(),
        w,
        labels,
        epsilon: None,
        halvings: 0,
    })
}

pub(crate) fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// Graph on `u` with an edge wherever no point of `w` lies on the segment.
pub fn visibility_graph(u: &[Point], w: &[Point]) -> SimpleGraph {
    let edges = all_pairs(u.len())
        .into_iter()
        .filter(|&(i, j)| !w.iter().any(|p| point_on_segment(p, &u[i], &u[j])));
    SimpleGraph::new(u.len(), edges)
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct VisibilityReport {
    /// Graph edges whose endpoints cannot see each other.
    pub blocked_edges: Vec<(usize, usize)>,
    /// Non-edges whose endpoints see each other.
    pub visible_non_edges: Vec<(usize, usize)>,
}

impl VisibilityReport {
    pub fn passed(&self) -> bool {
        self.blocked_edges.is_empty() && self.visible_non_edges.is_empty()
    }
}

pub fn verify_visibility_iff_edge(g: &PlaneGraph, gi: &GadgetInstance) -> VisibilityReport {
    let vis = visibility_graph(&gi.u, &gi.w);
    let mut report = VisibilityReport::default();
    for (i, j) in all_pairs(g.len()) {
        match (g.has_edge(i, j), vis.has_edge(i, j)) {
            (true, false) => report.blocked_edges.push((i, j)),
            (false, true) => report.visible_non_edges.push((i, j)),
            _ => {}
        }
    }
    report
}
