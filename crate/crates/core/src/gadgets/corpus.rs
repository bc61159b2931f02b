//! Fixed collection of small straight-line plane graphs in general position.

use super::PlaneGraph;
use crate::geometry::{crossing, is_general_position, Crossing, Point};
use crate::rng::SolverRng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusGraph {
    pub name: String,
    pub graph: PlaneGraph,
}

type Edges = Vec<(usize, usize)>;

/// Points `(i, i²)`: convex position, never three on a line.
fn parabola(n: usize) -> Vec<Point> {
    (0..n as i64).map(|i| Point::from_ints(i, i * i)).collect()
}

fn path_edges(n: usize) -> Vec<(usize, usize)> {
    (1..n).map(|i| (i - 1, i)).collect()
}

fn cycle_edges(n: usize) -> Vec<(usize, usize)> {
    let mut e = path_edges(n);
    e.push((0, n - 1));
    e
}

fn pts(raw: &[(i64, i64)]) -> Vec<Point> {
    raw.iter().map(|&(x, y)| Point::from_ints(x, y)).collect()
}

/// `n` lattice points in general position.
fn random_points(rng: &mut SolverRng, n: usize, range: usize) -> Vec<Point> {
    loop {
        let p: Vec<Point> = (0..n)
            .map(|_| Point::from_ints(rng.below(range) as i64, rng.below(range) as i64))
            .collect();
        if is_general_position(&p) {
            return p;
        }
    }
}

fn crosses_any(v: &[Point], edges: &[(usize, usize)], a: usize, b: usize) -> bool {
    edges.iter().any(|&(c, d)| {
        a != c && a != d && b != c && b != d && crossing(&v[a], &v[b], &v[c], &v[d]) != Crossing::None
    })
}

/// Shuffled vertex pairs.
fn shuffled_pairs(rng: &mut SolverRng, n: usize) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    for i in (1..pairs.len()).rev() {
        pairs.swap(i, rng.below(i + 1));
    }
    pairs
}

/// Non-crossing spanning tree: Kruskal over shuffled pairs, skipping pairs
/// that would cross a chosen edge.
fn random_tree(rng: &mut SolverRng, v: &[Point]) -> Vec<(usize, usize)> {
    let n = v.len();
    let mut comp: Vec<usize> = (0..n).collect();
    let mut edges = Vec::new();
    for (a, b) in shuffled_pairs(rng, n) {
        let (ca, cb) = (comp[a], comp[b]);
        if ca == cb || crosses_any(v, &edges, a, b) {
            continue;
        }
        edges.push((a, b));
        for c in comp.iter_mut() {
            if *c == cb {
                *c = ca;
            }
        }
    }
    edges
}

/// Maximal non-crossing edge set, i.e. a triangulation.
fn random_triangulation(rng: &mut SolverRng, v: &[Point]) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for (a, b) in shuffled_pairs(rng, v.len()) {
        if !crosses_any(v, &edges, a, b) {
            edges.push((a, b));
        }
    }
    edges
}

/// Graphs with at most ten vertices: paths, cycles, stars,
/// spiders, trees, triangulations and a few disconnected or
/// non-traceable cases.
pub fn corpus() -> Vec<CorpusGraph> {
    let mut out: Vec<(String, Vec<Point>, Edges)> = Vec::new();
    for n in [2, 3, 5, 8, 10] {
        out.push((format!("path-{n}"), parabola(n), path_edges(n)));
    }
    for n in [4, 6, 8] {
        out.push((format!("cycle-{n}"), parabola(n), cycle_edges(n)));
    }
    for n in [4, 6] {
        out.push((format!("fan-star-{n}"), parabola(n), (1..n).map(|i| (0, i)).collect()));
    }
    for n in [6, 8] {
        let mut e = cycle_edges(n);
        e.extend((2..n - 1).map(|i| (0, i)));
        out.push((format!("fan-triangulation-{n}"), parabola(n), e));
    }
    out.push(("triangle".into(), pts(&[(0, 0), (4, 1), (1, 3)]), vec![(0, 1), (1, 2), (0, 2)]));
    out.push(("single".into(), pts(&[(3, 2)]), vec![]));
    out.push((
        "k1-3".into(),
        pts(&[(0, 0), (5, 1), (-3, 4), (-2, -5)]),
        vec![(0, 1), (0, 2), (0, 3)],
    ));
    out.push((
        "k4-interior".into(),
        pts(&[(0, 0), (6, 0), (3, 5), (3, 2)]),
        vec![(0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (2, 3)],
    ));
    out.push((
        "wheel-5".into(),
        pts(&[(0, 0), (5, 1), (-1, 4), (-4, -2), (2, -5)]),
        vec![(1, 2), (2, 3), (3, 4), (1, 4), (0, 1), (0, 2), (0, 3), (0, 4)],
    ));
    out.push((
        "spider-3x2".into(),
        pts(&[(0, 0), (3, 1), (7, 2), (-2, 3), (-5, 7), (-1, -3), (-2, -8)]),
        vec![(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)],
    ));
    out.push((
        "two-edges".into(),
        pts(&[(0, 0), (3, 1), (1, 5), (6, 4)]),
        vec![(0, 1), (2, 3)],
    ));
    out.push((
        "path-plus-isolated".into(),
        pts(&[(0, 0), (4, 1), (7, 5), (1, 6)]),
        vec![(0, 1), (1, 2)],
    ));
    let mut rng = SolverRng::new(0x5eed);
    for n in [5, 6, 7, 8, 9, 10] {
        let v = random_points(&mut rng, n, 24);
        let e = random_tree(&mut rng, &v);
        out.push((format!("tree-{n}"), v, e));
    }
    for n in [5, 6, 7] {
        let v = random_points(&mut rng, n, 24);
        let e = random_triangulation(&mut rng, &v);
        out.push((format!("triangulation-{n}"), v, e));
    }
    out.into_iter()
        .map(|(name, v, e)| {
            let graph = PlaneGraph::new(v, e).unwrap_or_else(|err| panic!("corpus graph {name}: {err}"));
            CorpusGraph { name, graph }
        })
        .collect()
}
