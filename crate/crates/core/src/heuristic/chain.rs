use serde::{Deserialize, Serialize};

use super::SolveError;
use crate::geometry::{convex_hull_indices, crossing, meet_only_at, Crossing, Planar};
use crate::path::{is_simple_in, Color, PolyPath};
use crate::rng::SolverRng;

/// Where a free point is attached to a chain. Vertices are point indices of
/// the chain's color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Attachment {
    /// Connect to this chain endpoint; the new point becomes the endpoint.
    Endpoint(usize),
    /// Replace chain edge `(a, b)` by `(a, p)` and `(p, b)`.
    Edge(usize, usize),
}

/// Open polygonal chain grown from a convex hull with one edge removed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HullChain {
    pub color: Color,
    vertices: Vec<usize>,
}

impl HullChain {
    pub fn new(color: Color, vertices: Vec<usize>) -> Self {
        assert!(!vertices.is_empty(), "chain needs at least one vertex");
        HullChain { color, vertices }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// First endpoint (`u`).
    pub fn head(&self) -> usize {
        self.vertices[0]
    }

    /// Last endpoint (`v`).
    pub fn tail(&self) -> usize {
        self.vertices[self.vertices.len() - 1]
    }

    pub fn to_path(&self) -> PolyPath {
        PolyPath::new(self.vertices.clone())
    }

    pub fn is_simple<P: Planar>(&self, points: &[P]) -> bool {
        is_simple_in(&self.vertices, points)
    }

    fn position(&self, vertex: usize) -> Option<usize> {
        self.vertices.iter().position(|&v| v == vertex)
    }

    /// Sight segment from `p` to the chain vertex at `pos` touches the chain
    /// only at that vertex.
    fn sight_clear<P: Planar>(&self, points: &[P], p: &P, pos: usize) -> bool {
        let w = &points[self.vertices[pos]];
        if p == w {
            return false;
        }
        for j in 0..self.vertices.len().saturating_sub(1) {
            let a = &points[self.vertices[j]];
            let b = &points[self.vertices[j + 1]];
            let clear = if j + 1 == pos {
                meet_only_at(w, p, a)
            } else if j == pos {
                meet_only_at(w, p, b)
            } else {
                crossing(p, w, a, b) == Crossing::None
            };
            if !clear {
                return false;
            }
        }
        true
    }

    /// `p` sees chain endpoint `vertex`: segment `p`-`vertex` meets the chain
    /// only at `vertex`. False when `vertex` is not an endpoint.
    pub fn sees_endpoint<P: Planar>(&self, points: &[P], p: &P, vertex: usize) -> bool {
        let last = self.vertices.len() - 1;
        match self.position(vertex) {
            Some(pos) if pos == 0 || pos == last => self.sight_clear(points, p, pos),
            _ => false,
        }
    }

    /// `p` sees chain edge `(a, b)`: both `p`-`a` and `p`-`b` meet the chain
    /// only at their own chain vertex. False when `(a, b)` is not an edge.
    pub fn sees_edge<P: Planar>(&self, points: &[P], p: &P, a: usize, b: usize) -> bool {
        let Some(i) = self.edge_position(a, b) else {
            return false;
        };
        self.sight_clear(points, p, i) && self.sight_clear(points, p, i + 1)
    }

    /// Index `i` such that the edge is `(vertices[i], vertices[i + 1])`.
    fn edge_position(&self, a: usize, b: usize) -> Option<usize> {
        self.vertices
            .windows(2)
            .position(|w| (w[0] == a && w[1] == b) || (w[0] == b && w[1] == a))
    }

    /// Every endpoint and edge visible from `p`, in the fixed order head,
    /// tail, then edges along the chain.
    pub fn visible_targets<P: Planar>(&self, points: &[P], p: &P) -> Vec<Attachment> {
        let k = self.vertices.len();
        let clear: Vec<bool> = (0..k).map(|pos| self.sight_clear(points, p, pos)).collect();
        let mut targets = Vec::new();
        if clear[0] {
            targets.push(Attachment::Endpoint(self.head()));
        }
        if k > 1 && clear[k - 1] {
            targets.push(Attachment::Endpoint(self.tail()));
        }
        for i in 0..k.saturating_sub(1) {
            if clear[i] && clear[i + 1] {
                targets.push(Attachment::Edge(self.vertices[i], self.vertices[i + 1]));
            }
        }
        targets
    }

    /// Attaches point `p` (an index of this chain's color) after checking
    /// that the target is visible.
    pub fn insert<P: Planar>(
        &mut self,
        points: &[P],
        p: usize,
        target: Attachment,
    ) -> Result<(), SolveError> {
        let visible = match target {
            Attachment::Endpoint(v) => self.sees_endpoint(points, &points[p], v),
            Attachment::Edge(a, b) => self.sees_edge(points, &points[p], a, b),
        };
        if !visible || self.vertices.contains(&p) {
            return Err(SolveError::TargetNotVisible);
        }
        self.attach(p, target);
        Ok(())
    }

    /// Unchecked attachment; `target` must come from [`Self::visible_targets`].
    pub(crate) fn attach(&mut self, p: usize, target: Attachment) {
        match target {
            Attachment::Endpoint(v) if v == self.head() => self.vertices.insert(0, p),
            Attachment::Endpoint(_) => self.vertices.push(p),
            Attachment::Edge(a, b) => {
                let i = self.edge_position(a, b).expect("edge on chain");
                self.vertices.insert(i + 1, p);
            }
        }
    }
}

/// Per hull edge `(hull[i], hull[i+1])`, the number of `other_edges` it
/// crosses properly.
pub fn hull_edge_crossings<P: Planar>(points: &[P], hull: &[usize], other_edges: &[(P, P)]) -> Vec<usize> {
    let k = hull.len();
    (0..k)
        .map(|i| {
            let a = &points[hull[i]];
            let b = &points[hull[(i + 1) % k]];
            other_edges
                .iter()
                .filter(|(c, d)| crossing(a, b, c, d) == Crossing::Proper)
                .count()
        })
        .collect()
}

/// Closed hull edges as point pairs.
pub fn hull_edges<P: Planar>(points: &[P], hull: &[usize]) -> Vec<(P, P)> {
    let k = hull.len();
    (0..k)
        .map(|i| (points[hull[i]].clone(), points[hull[(i + 1) % k]].clone()))
        .collect()
}

/// Result of opening a hull: the chain plus the choice that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenedHull {
    pub chain: HullChain,
    /// Hull vertices, counter-clockwise.
    pub hull: Vec<usize>,
    /// Positions `i` of hull edges `(hull[i], hull[i+1])` with the most
    /// crossings against the other hull.
    pub max_edges: Vec<usize>,
    pub removed: (usize, usize),
}

/// Builds the convex hull, picks a uniformly random edge among those with
/// the most proper crossings against `other_hull_edges`, and removes it.
pub fn open_hull<P: Planar>(
    color: Color,
    points: &[P],
    other_hull_edges: &[(P, P)],
    rng: &mut SolverRng,
) -> Result<OpenedHull, SolveError> {
    if points.len() < 3 {
        return Err(SolveError::FewerThanThreePoints { color, count: points.len() });
    }
    let hull = convex_hull_indices(points)?;
    let counts = hull_edge_crossings(points, &hull, other_hull_edges);
    let best = counts.iter().copied().max().unwrap_or(0);
    let max_edges: Vec<usize> = (0..hull.len()).filter(|&i| counts[i] == best).collect();
    let pick = max_edges[rng.below(max_edges.len())];
    let k = hull.len();
    // Removing (hull[pick], hull[pick+1]) leaves the cycle read from pick+1.
    let vertices: Vec<usize> = (1..=k).map(|s| hull[(pick + s) % k]).collect();
    Ok(OpenedHull {
        chain: HullChain::new(color, vertices),
        removed: (hull[pick], hull[(pick + 1) % k]),
        hull,
        max_edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{GridPoint, Orientation, Point};

    fn g(x: i64, y: i64) -> GridPoint {
        GridPoint::new(x, y)
    }

    /// Independent visibility check straight from the definition: compare the
    /// sight segment with every chain edge using the raw crossing predicate.
    fn oracle_sees_vertex(points: &[GridPoint], chain: &[usize], p: &GridPoint, w: usize) -> bool {
        let wp = &points[w];
        chain.windows(2).all(|e| {
            let (a, b) = (&points[e[0]], &points[e[1]]);
            match crossing(p, wp, a, b) {
                Crossing::None => true,
                Crossing::Proper => false,
                Crossing::Improper => {
                    // Allowed only when the contact is exactly the vertex w:
                    // w is an endpoint of the edge and nothing else overlaps.
                    let other = if e[0] == w {
                        b
                    } else if e[1] == w {
                        a
                    } else {
                        return false;
                    };
                    let col = wp.orient(p, other) == Orientation::Collinear;
                    !(col && crate::geometry::point_on_segment(other, wp, p))
                        && !(col && crate::geometry::point_on_segment(p, wp, other))
                }
            }
        })
    }

    #[test]
    fn endpoint_visibility_examples() {
        let pts = vec![g(0, 0), g(1, 0), g(2, 1)];
        let chain = HullChain::new(Color::Red, vec![0, 1]);
        assert!(chain.sees_endpoint(&pts, &pts[2], 1));

        let sq = vec![g(0, 0), g(2, 0), g(2, 2), g(0, 2), g(1, 1), g(3, 1)];
        let chain = HullChain::new(Color::Red, vec![0, 1, 2, 3]);
        assert!(chain.sees_endpoint(&sq, &sq[4], 0));
        assert!(!chain.sees_endpoint(&sq, &sq[5], 0));
        assert_eq!(
            chain.sees_endpoint(&sq, &sq[5], 0),
            oracle_sees_vertex(&sq, chain.vertices(), &sq[5], 0)
        );
        // Vertex 1 is interior to the chain, never an endpoint target.
        assert!(!chain.sees_endpoint(&sq, &sq[4], 1));

        // Sight lines collinear with the first segment: overlapping it blocks,
        // extending it away from the chain does not.
        let line = vec![g(0, 0), g(2, 0), g(2, 2)];
        let chain = HullChain::new(Color::Red, vec![1, 0, 2]);
        assert!(!chain.sees_endpoint(&line, &g(-1, 0), 1));
        assert!(chain.sees_endpoint(&line, &g(4, 0), 1));
    }

    /// Zig-zag chain p1-x1-x2-x3-p2 where x2 is hidden from rp behind the
    /// last edge: rp sees both endpoints and the two outer edges only.
    fn zigzag() -> (Vec<GridPoint>, HullChain, GridPoint) {
        let pts = vec![g(-8, 0), g(-4, 1), g(0, -2), g(2, 2), g(-2, 6)];
        (pts, HullChain::new(Color::Red, vec![0, 1, 2, 3, 4]), g(0, 20))
    }

    #[test]
    fn edge_visibility_zigzag() {
        let (pts, chain, rp) = zigzag();
        assert!(chain.is_simple(&pts));
        assert!(chain.sees_endpoint(&pts, &rp, 0));
        assert!(chain.sees_endpoint(&pts, &rp, 4));
        assert!(chain.sees_edge(&pts, &rp, 0, 1));
        assert!(!chain.sees_edge(&pts, &rp, 1, 2));
        assert!(!chain.sees_edge(&pts, &rp, 2, 3));
        assert!(chain.sees_edge(&pts, &rp, 3, 4));
        let targets = chain.visible_targets(&pts, &rp);
        assert_eq!(
            targets,
            vec![
                Attachment::Endpoint(0),
                Attachment::Endpoint(4),
                Attachment::Edge(0, 1),
                Attachment::Edge(3, 4)
            ]
        );
        for pos in 0..5 {
            assert_eq!(
                chain.sight_clear(&pts, &rp, pos),
                oracle_sees_vertex(&pts, chain.vertices(), &rp, pos),
            );
        }
    }

    #[test]
    fn triangle_edge_visible_from_outside() {
        let pts = vec![g(0, 0), g(4, 0), g(2, 3), g(2, -2)];
        let chain = HullChain::new(Color::Blue, vec![2, 0, 1]);
        assert!(chain.sees_edge(&pts, &pts[3], 0, 1));
        assert!(!chain.sees_edge(&pts, &pts[3], 2, 0));
    }

    /// A point sealed inside a pocket: every sight line to an endpoint is
    /// blocked and no edge has both endpoints in view.
    pub(crate) fn pocket() -> (Vec<GridPoint>, HullChain, GridPoint) {
        let (red, _) = crate::fixtures::pocket_points();
        let (chain, p) = crate::fixtures::pocket_chain();
        let pts: Vec<GridPoint> = red.iter().map(|&(x, y)| g(x, y)).collect();
        let free = pts[p];
        (pts, HullChain::new(Color::Red, chain), free)
    }

    #[test]
    fn pocket_point_sees_nothing() {
        let (pts, chain, p) = pocket();
        assert!(chain.is_simple(&pts));
        assert!(chain.visible_targets(&pts, &p).is_empty());
        // Brute force over every edge and endpoint.
        for e in chain.vertices().windows(2) {
            let both = oracle_sees_vertex(&pts, chain.vertices(), &p, e[0])
                && oracle_sees_vertex(&pts, chain.vertices(), &p, e[1]);
            assert!(!both);
        }
        assert!(!oracle_sees_vertex(&pts, chain.vertices(), &p, chain.head()));
        assert!(!oracle_sees_vertex(&pts, chain.vertices(), &p, chain.tail()));
    }

    #[test]
    fn insert_at_endpoint_and_edge() {
        let pts = vec![g(0, 0), g(1, 0), g(2, 1)];
        let mut chain = HullChain::new(Color::Red, vec![0, 1]);
        chain.insert(&pts, 2, Attachment::Endpoint(1)).unwrap();
        assert_eq!(chain.vertices(), &[0, 1, 2]);
        assert_eq!(chain.tail(), 2);

        let pts = vec![g(0, 0), g(2, 0), g(2, 2), g(1, 1)];
        let mut chain = HullChain::new(Color::Red, vec![0, 1, 2]);
        chain.insert(&pts, 3, Attachment::Edge(0, 1)).unwrap();
        assert_eq!(chain.vertices(), &[0, 3, 1, 2]);

        let mut chain = HullChain::new(Color::Red, vec![0, 1, 2]);
        chain.insert(&pts, 3, Attachment::Endpoint(0)).unwrap();
        assert_eq!(chain.vertices(), &[3, 0, 1, 2]);
        assert_eq!(chain.head(), 3);
    }

    #[test]
    fn insert_rejects_hidden_target() {
        let (pts, mut chain, rp) = zigzag();
        let mut all = pts.clone();
        all.push(rp);
        assert_eq!(chain.insert(&all, 5, Attachment::Edge(1, 2)), Err(SolveError::TargetNotVisible));
        assert_eq!(chain.insert(&all, 5, Attachment::Endpoint(2)), Err(SolveError::TargetNotVisible));
        chain.insert(&all, 5, Attachment::Edge(3, 4)).unwrap();
        assert!(chain.is_simple(&all));
    }

    #[test]
    fn random_insertions_stay_simple() {
        let mut rng = SolverRng::new(2024);
        let mut done = 0;
        let mut seed = 0;
        while done < 1000 {
            seed += 1;
            let pts: Vec<GridPoint> = crate::generate::lattice_points(seed, 12, 1 << 20);
            if !crate::geometry::is_general_position(&pts) {
                continue;
            }
            let opened = open_hull(Color::Red, &pts, &[], &mut rng).unwrap();
            let mut chain = opened.chain;
            let mut free: Vec<usize> = (0..pts.len()).filter(|i| !chain.vertices().contains(i)).collect();
            while let Some(p) = free.pop() {
                let targets = chain.visible_targets(&pts, &pts[p]);
                if targets.is_empty() {
                    break;
                }
                let t = targets[rng.below(targets.len())];
                chain.insert(&pts, p, t).unwrap();
                assert!(chain.is_simple(&pts), "seed {seed}");
                done += 1;
            }
        }
    }

    #[test]
    fn open_hull_disjoint_hulls() {
        let red = vec![g(0, 0), g(2, 0), g(1, 2)];
        let blue = vec![g(10, 0), g(12, 0), g(11, 2)];
        let blue_hull = convex_hull_indices(&blue).unwrap();
        let mut rng = SolverRng::new(1);
        let opened = open_hull(Color::Red, &red, &hull_edges(&blue, &blue_hull), &mut rng).unwrap();
        assert_eq!(opened.max_edges, vec![0, 1, 2]);
        assert_eq!(opened.chain.len(), 3);
        assert!(opened.chain.is_simple(&red));
    }

    #[test]
    fn open_hull_overlapping_squares() {
        let a = vec![g(0, 0), g(4, 0), g(4, 4), g(0, 4)];
        let b = vec![g(2, 1), g(6, 1), g(6, 5), g(2, 5)];
        let ha = convex_hull_indices(&a).unwrap();
        let hb = convex_hull_indices(&b).unwrap();
        let ea = hull_edges(&a, &ha);
        let eb = hull_edges(&b, &hb);
        // Exhaustive pair count as the oracle.
        let oracle = |mine: &[(GridPoint, GridPoint)], other: &[(GridPoint, GridPoint)]| -> Vec<usize> {
            mine.iter()
                .map(|(p, q)| other.iter().filter(|(c, d)| crossing(p, q, c, d) == Crossing::Proper).count())
                .collect()
        };
        assert_eq!(hull_edge_crossings(&a, &ha, &eb), oracle(&ea, &eb));
        let mut rng = SolverRng::new(5);
        let oa = open_hull(Color::Red, &a, &eb, &mut rng).unwrap();
        let ob = open_hull(Color::Blue, &b, &ea, &mut rng).unwrap();
        assert_eq!(oa.max_edges.len(), 2);
        assert_eq!(ob.max_edges.len(), 2);
        // Red: right edge (4,0)-(4,4) and top edge (4,4)-(0,4).
        let red_edges: Vec<(usize, usize)> =
            oa.max_edges.iter().map(|&i| (ha[i], ha[(i + 1) % 4])).collect();
        assert_eq!(red_edges, vec![(1, 2), (2, 3)]);
        assert!(red_edges.contains(&oa.removed));
    }

    #[test]
    fn open_hull_deterministic() {
        let pts = crate::generate::lattice_points(3, 15, 1000);
        let run = |seed| open_hull(Color::Red, &pts, &[], &mut SolverRng::new(seed)).unwrap().removed;
        assert_eq!(run(17), run(17));
    }

    #[test]
    fn open_hull_needs_three_points() {
        let mut rng = SolverRng::new(0);
        assert_eq!(
            open_hull(Color::Blue, &[g(0, 0), g(1, 1)], &[], &mut rng),
            Err(SolveError::FewerThanThreePoints { color: Color::Blue, count: 2 })
        );
    }

    #[test]
    fn rational_and_grid_visibility_agree() {
        let (pts, chain, rp) = zigzag();
        let rat: Vec<Point> = pts.iter().map(|q| Point::from_ints(q.x, q.y)).collect();
        let rrp = Point::from_ints(rp.x, rp.y);
        let targets_g = chain.visible_targets(&pts, &rp);
        let targets_r = chain.visible_targets(&rat, &rrp);
        assert_eq!(targets_g, targets_r);
    }
}
