use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{GadgetInstance, PlaneGraph};
use crate::geometry::Scalar;

/// Direction vector, not normalized.
pub(crate) type Dir = (Scalar, Scalar);

pub(crate) fn cross(a: &Dir, b: &Dir) -> Scalar {
    &a.0 * &b.1 - &a.1 * &b.0
}

fn upper_half(d: &Dir) -> bool {
    d.1.is_positive() || (d.1.is_zero() && d.0.is_positive())
}

/// Counter-clockwise angular order starting at the positive x axis.
pub(crate) fn angle_cmp(a: &Dir, b: &Dir) -> Ordering {
    match (upper_half(a), upper_half(b)) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => match cross(a, b) {
            c if c.is_positive() => Ordering::Less,
            c if c.is_negative() => Ordering::Greater,
            _ => Ordering::Equal,
        },
    }
}

/// `d` lies strictly inside the counter-clockwise sweep from `a` to `b`.
pub(crate) fn strictly_inside(a: &Dir, b: &Dir, d: &Dir) -> bool {
    let ab = cross(a, b);
    let ad = cross(a, d);
    let db = cross(d, b);
    if ab.is_positive() {
        ad.is_positive() && db.is_positive()
    } else if ab.is_zero() && (&a.0 * &b.0 + &a.1 * &b.1).is_negative() {
        ad.is_positive()
    } else {
        // Reflex sweep: inside unless in the closed cone from `b` to `a`.
        !(!ad.is_positive() && !db.is_positive())
    }
}

fn same_direction(a: &Dir, b: &Dir) -> bool {
    cross(a, b).is_zero() && (&a.0 * &b.0 + &a.1 * &b.1).is_positive()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "neighbor", rename_all = "lowercase")]
pub enum FanBoundary {
    /// Direction from the vertex towards this neighbor.
    Edge(usize),
    /// Direction away from this neighbor (the extended edge).
    Ray(usize),
}

/// The rays and edges around one vertex, sorted counter-clockwise. Sector
/// `i` is the open sweep from boundary `i` to boundary `i + 1` (cyclic).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedEdgeFan {
    pub vertex: usize,
    pub boundaries: Vec<(FanBoundary, Dir)>,
}

impl ExtendedEdgeFan {
    pub fn new(g: &PlaneGraph, v: usize) -> Self {
        let center = &g.vertices()[v];
        let mut boundaries = Vec::new();
        for u in g.neighbors(v) {
            let p = &g.vertices()[u];
            let d = (&p.x - &center.x, &p.y - &center.y);
            let r = (-&d.0, -&d.1);
            boundaries.push((FanBoundary::Edge(u), d));
            boundaries.push((FanBoundary::Ray(u), r));
        }
        boundaries.sort_by(|a, b| angle_cmp(&a.1, &b.1));
        ExtendedEdgeFan { vertex: v, boundaries }
    }

    pub fn sector_count(&self) -> usize {
        self.boundaries.len()
    }

    pub(crate) fn sector_bounds(&self, i: usize) -> (&Dir, &Dir) {
        let k = self.boundaries.len();
        (&self.boundaries[i].1, &self.boundaries[(i + 1) % k].1)
    }

    /// Sector strictly containing direction `d`; `None` on a boundary.
    pub fn sector_of(&self, d: &Dir) -> Option<usize> {
        (0..self.sector_count()).find(|&i| {
            let (a, b) = self.sector_bounds(i);
            strictly_inside(a, b, d)
        })
    }

    pub fn boundary_of(&self, d: &Dir) -> Option<FanBoundary> {
        self.boundaries
            .iter()
            .find(|(_, b)| same_direction(b, d))
            .map(|(kind, _)| *kind)
    }
}

/// Distance-ε points around a degree-2 vertex, split by the side of the
/// angle its two edges form. `positions` count distinct occupied sectors
/// and rays rather than points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideCounts {
    pub concave_points: usize,
    pub convex_points: usize,
    pub concave_positions: usize,
    pub convex_positions: usize,
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
enum Position {
    Sector(usize),
    Boundary(FanBoundary),
}

/// Side counts for vertex `v` of degree 2; `None` for other degrees or
/// gadgets without ε.
pub fn side_counts(g: &PlaneGraph, gi: &GadgetInstance, v: usize) -> Option<SideCounts> {
    let eps = gi.epsilon.as_ref()?;
    let nb = g.neighbors(v);
    if nb.len() != 2 {
        return None;
    }
    let center = &g.vertices()[v];
    let dir_to = |u: usize| {
        let p = &g.vertices()[u];
        (&p.x - &center.x, &p.y - &center.y)
    };
    let (mut e1, mut e2) = (dir_to(nb[0]), dir_to(nb[1]));
    if cross(&e1, &e2).is_negative() {
        std::mem::swap(&mut e1, &mut e2);
    }
    let fan = ExtendedEdgeFan::new(g, v);
    let hi = eps * eps;
    let lo = &hi / Scalar::from_integer(4.into());
    let mut counts = SideCounts {
        concave_points: 0,
        convex_points: 0,
        concave_positions: 0,
        convex_positions: 0,
    };
    let mut concave = BTreeSet::new();
    let mut convex = BTreeSet::new();
    for (p, _) in gi.owned_by(v) {
        let d2 = p.dist_sq(center);
        if d2 < lo || d2 > hi {
            continue;
        }
        let d = (&p.x - &center.x, &p.y - &center.y);
        let pos = match fan.boundary_of(&d) {
            Some(b) => Position::Boundary(b),
            None => Position::Sector(fan.sector_of(&d).expect("off-boundary direction has a sector")),
        };
        if strictly_inside(&e1, &e2, &d) {
            counts.convex_points += 1;
            convex.insert(pos);
        } else {
            counts.concave_points += 1;
            concave.insert(pos);
        }
    }
    counts.concave_positions = concave.len();
    counts.convex_positions = convex.len();
    Some(counts)
}
